#pragma once

#include <cmath>

#include <Eigen/Core>

#include "endoxai/core/error.hpp"

namespace endoxai::explain {

inline double default_kernel_width(int segment_count) {
  return 0.25 * std::sqrt(static_cast<double>(segment_count));
}

/// Exponential kernel over normalized Hamming distance from the all-ones
/// row: weight = exp(-D^2 / width^2), D = fraction of absent segments.
inline double kernel_weight(const Eigen::RowVectorXd& z, double kernel_width) {
  if (kernel_width <= 0.0) throw ContractError("kernel_width must be > 0");
  if (z.size() == 0) throw ContractError("kernel_weight: empty row");
  double absent = 0;
  for (Eigen::Index j = 0; j < z.size(); ++j)
    if (z(j) == 0.0) absent += 1.0;
  const double dist = absent / static_cast<double>(z.size());
  return std::exp(-dist * dist / (kernel_width * kernel_width));
}

}  // namespace endoxai::explain
