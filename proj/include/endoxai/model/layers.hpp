#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "endoxai/core/rng.hpp"
#include "endoxai/model/param.hpp"

namespace endoxai::model {

// Batch normalization over the feature (channel) axis of N x F inputs.
// Training uses batch statistics and updates the moving estimates with
// momentum; inference normalizes by the moving estimates.
struct BatchNorm {
  Eigen::VectorXd gamma, beta, moving_mean, moving_var;
  Eigen::VectorXd dgamma, dbeta;
  double momentum = 0.99;
  double eps = 0.001;

  struct Cache {
    Eigen::MatrixXd centered;  // X - mu
    Eigen::MatrixXd x_hat;
    Eigen::VectorXd inv_std;
  };

  void init(int dim, double momentum_value, double eps_value) {
    momentum = momentum_value;
    eps = eps_value;
    gamma = Eigen::VectorXd::Ones(dim);
    beta = Eigen::VectorXd::Zero(dim);
    moving_mean = Eigen::VectorXd::Zero(dim);
    moving_var = Eigen::VectorXd::Ones(dim);
    dgamma = Eigen::VectorXd::Zero(dim);
    dbeta = Eigen::VectorXd::Zero(dim);
  }

  Eigen::MatrixXd forward_train(const Eigen::MatrixXd& x, Cache& cache) {
    const double n = static_cast<double>(x.rows());
    Eigen::VectorXd mu = x.colwise().mean();
    cache.centered = x.rowwise() - mu.transpose();
    Eigen::VectorXd var = cache.centered.array().square().colwise().sum() / n;
    cache.inv_std = (var.array() + eps).rsqrt();
    cache.x_hat = cache.centered.array().rowwise() * cache.inv_std.transpose().array();
    moving_mean = momentum * moving_mean + (1.0 - momentum) * mu;
    moving_var = momentum * moving_var + (1.0 - momentum) * var;
    return (cache.x_hat.array().rowwise() * gamma.transpose().array()).rowwise() +
           beta.transpose().array();
  }

  Eigen::MatrixXd forward_eval(const Eigen::MatrixXd& x) const {
    Eigen::ArrayXd inv_std = (moving_var.array() + eps).rsqrt();
    Eigen::MatrixXd x_hat =
        (x.rowwise() - moving_mean.transpose()).array().rowwise() * inv_std.transpose();
    return (x_hat.array().rowwise() * gamma.transpose().array()).rowwise() +
           beta.transpose().array();
  }

  Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& dy) {
    const double n = static_cast<double>(dy.rows());
    dgamma = (dy.array() * cache.x_hat.array()).colwise().sum();
    dbeta = dy.colwise().sum();
    Eigen::MatrixXd dx_hat = dy.array().rowwise() * gamma.transpose().array();
    Eigen::RowVectorXd sum_dx_hat = dx_hat.colwise().sum();
    Eigen::RowVectorXd sum_dx_hat_x_hat = (dx_hat.array() * cache.x_hat.array()).colwise().sum();
    Eigen::MatrixXd dx =
        ((dx_hat * n).rowwise() - sum_dx_hat).array() -
        cache.x_hat.array().rowwise() * sum_dx_hat_x_hat.array();
    dx.array().rowwise() *= (cache.inv_std / n).transpose().array();
    return dx;
  }

  void zero_grad() {
    dgamma.setZero();
    dbeta.setZero();
  }
};

// Fully connected layer, weights stored input x output.
struct Dense {
  Eigen::MatrixXd w;
  Eigen::VectorXd b;
  Eigen::MatrixXd dw;
  Eigen::VectorXd db;

  // Fan-based (Glorot) uniform init from a seeded stream; biases start at 0.
  void init(int in_dim, int out_dim, rng::Stream& stream) {
    const double limit = std::sqrt(6.0 / (in_dim + out_dim));
    w.resize(in_dim, out_dim);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i)
        w(i, j) = stream.next_range(-limit, limit);
    b = Eigen::VectorXd::Zero(out_dim);
    dw = Eigen::MatrixXd::Zero(in_dim, out_dim);
    db = Eigen::VectorXd::Zero(out_dim);
  }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const {
    return (x * w).rowwise() + b.transpose();
  }

  /// Accumulates weight gradients and returns the input gradient.
  Eigen::MatrixXd backward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& dy) {
    dw += x.transpose() * dy;
    db += dy.colwise().sum().transpose();
    return dy * w.transpose();
  }

  void zero_grad() {
    dw.setZero();
    db.setZero();
  }
};

}  // namespace endoxai::model
