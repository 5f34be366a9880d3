#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

#include "endoxai/core/error.hpp"
#include "endoxai/core/rng.hpp"

namespace endoxai::model {

/// Row-wise softmax with max subtraction, so large logits cannot overflow.
inline Eigen::MatrixXd softmax(const Eigen::MatrixXd& logits) {
  if (!logits.allFinite())
    throw NumericError("softmax: logits must be finite");
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::RowVectorXd row = logits.row(i);
    double m = row.maxCoeff();
    Eigen::RowVectorXd e = (row.array() - m).exp();
    out.row(i) = e / e.sum();
  }
  return out;
}

/// Identifies one dropout draw; the mask depends only on this key and the
/// element index, never on evaluation order.
struct DropoutKey {
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  std::uint64_t step = 0;
};

struct DropoutResult {
  Eigen::MatrixXd output;
  Eigen::MatrixXd mask;  // 0 for dropped units, 1/(1-rate) for survivors
};

/// Training mode: zero each unit with probability `rate`, scale survivors by
/// 1/(1-rate) so expected activations are unchanged. Inference: identity.
inline DropoutResult dropout_forward(const Eigen::MatrixXd& inputs, double rate,
                                     bool training_mode, const DropoutKey& key) {
  if (rate < 0.0 || rate >= 1.0)
    throw ConfigError("dropout rate must satisfy 0 <= rate < 1");
  DropoutResult result;
  if (!training_mode || rate == 0.0) {
    result.output = inputs;
    result.mask = Eigen::MatrixXd::Ones(inputs.rows(), inputs.cols());
    return result;
  }
  const double scale = 1.0 / (1.0 - rate);
  const std::uint64_t draw_seed = rng::mix(key.seed, key.epoch, key.step);
  result.mask.resize(inputs.rows(), inputs.cols());
  for (Eigen::Index j = 0; j < inputs.size(); ++j) {
    double r = rng::unit_at(rng::kStreamDropout, draw_seed,
                            static_cast<std::uint64_t>(j), 0);
    result.mask(j) = r < rate ? 0.0 : scale;
  }
  result.output = inputs.cwiseProduct(result.mask);
  return result;
}

}  // namespace endoxai::model
