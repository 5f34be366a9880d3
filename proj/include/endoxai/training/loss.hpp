#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "endoxai/core/error.hpp"

namespace endoxai::training {

inline constexpr double kProbClipLo = 1e-7;
inline constexpr double kProbClipHi = 1.0 - 1e-7;

/// Mean over the batch of -sum_c y log p, with p clipped to
/// [1e-7, 1 - 1e-7] before the log.
inline double categorical_crossentropy(const Eigen::MatrixXd& y_true,
                                       const Eigen::MatrixXd& p_pred) {
  if (y_true.rows() != p_pred.rows() || y_true.cols() != p_pred.cols())
    throw ContractError("categorical_crossentropy: shape mismatch");
  if (y_true.rows() == 0) throw ContractError("categorical_crossentropy: empty batch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < p_pred.rows(); ++i) {
    double p_sum = p_pred.row(i).sum();
    if (!(std::fabs(p_sum - 1.0) <= 1e-5))
      throw ContractError("categorical_crossentropy: prediction row does not sum to 1");
    double y_sum = 0.0;
    double row = 0.0;
    for (Eigen::Index c = 0; c < p_pred.cols(); ++c) {
      const double y = y_true(i, c);
      if (y != 0.0 && y != 1.0)
        throw ContractError("categorical_crossentropy: labels must be one-hot");
      y_sum += y;
      if (y == 1.0) {
        double p = std::clamp(p_pred(i, c), kProbClipLo, kProbClipHi);
        row -= std::log(p);
      }
    }
    if (y_sum != 1.0)
      throw ContractError("categorical_crossentropy: labels must be one-hot");
    total += row;
  }
  return total / static_cast<double>(p_pred.rows());
}

}  // namespace endoxai::training
