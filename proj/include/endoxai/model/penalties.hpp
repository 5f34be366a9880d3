#pragma once

#include <Eigen/Core>

#include "endoxai/core/error.hpp"

namespace endoxai::model {

/// lambda * sum(|v_i|) over all elements.
template <typename Derived>
double l1_penalty(const Eigen::MatrixBase<Derived>& values, double lambda) {
  if (lambda < 0) throw ContractError("l1_penalty: lambda must be >= 0");
  return lambda * values.derived().array().abs().sum();
}

/// lambda * sum(w_i^2) over all elements.
template <typename Derived>
double l2_penalty(const Eigen::MatrixBase<Derived>& weights, double lambda) {
  if (lambda < 0) throw ContractError("l2_penalty: lambda must be >= 0");
  return lambda * weights.derived().array().square().sum();
}

}  // namespace endoxai::model
