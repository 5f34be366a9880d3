#pragma once

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/LU>

#include "endoxai/core/error.hpp"

namespace endoxai::explain {

struct SurrogateFit {
  Eigen::VectorXd coefficients;
  double intercept = 0;
  double local_fidelity = 0;  // weighted R^2
};

/// Exact minimizer of sum_i w_i (y_i - b0 - z_i . b)^2 + lambda |b|^2 via the
/// weighted normal equations; the intercept is not penalized.
inline SurrogateFit fit_surrogate(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& weights, double ridge_lambda) {
  const Eigen::Index n = z.rows(), d = z.cols();
  if (y.size() != n || weights.size() != n)
    throw ContractError("fit_surrogate: row count mismatch");
  if (n < 1 || d < 1) throw ContractError("fit_surrogate: empty system");
  if (ridge_lambda < 0.0) throw ContractError("fit_surrogate: lambda must be >= 0");
  double wsum = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights(i) < 0.0) throw ContractError("fit_surrogate: negative weight");
    wsum += weights(i);
  }
  if (wsum <= 0.0) throw ContractError("fit_surrogate: weights sum to zero");

  Eigen::MatrixXd x(n, d + 1);
  x.col(0).setOnes();
  x.rightCols(d) = z;
  Eigen::MatrixXd xtw = x.transpose() * weights.asDiagonal();
  Eigen::MatrixXd a = xtw * x;
  for (Eigen::Index j = 1; j <= d; ++j) a(j, j) += ridge_lambda;
  Eigen::VectorXd b = xtw * y;

  Eigen::VectorXd theta;
  if (ridge_lambda == 0.0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible())
      throw ContractError(
          "fit_surrogate: normal equations are rank-deficient at lambda=0; "
          "use lambda > 0");
    theta = lu.solve(b);
  } else {
    theta = a.ldlt().solve(b);  // SPD for lambda > 0 and positive weight mass
  }

  SurrogateFit fit;
  fit.intercept = theta(0);
  fit.coefficients = theta.tail(d);

  Eigen::VectorXd residual = y - x * theta;
  double rss = 0, tss = 0;
  const double y_mean = xtw.row(0).dot(y) / wsum;  // weighted mean of y
  for (Eigen::Index i = 0; i < n; ++i) {
    rss += weights(i) * residual(i) * residual(i);
    tss += weights(i) * (y(i) - y_mean) * (y(i) - y_mean);
  }
  if (tss < 1e-12)
    fit.local_fidelity = rss < 1e-12 ? 1.0 : 0.0;
  else
    fit.local_fidelity = 1.0 - rss / tss;
  return fit;
}

}  // namespace endoxai::explain
