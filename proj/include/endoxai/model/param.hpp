#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace endoxai::model {

/// Flat view of one trainable tensor and its gradient buffer.
struct TensorRef {
  std::string name;
  double* data = nullptr;
  double* grad = nullptr;
  std::size_t size = 0;
};

/// Named array view used for checkpoints and parameter counting. Includes
/// non-trainable state (batch-norm moving statistics).
struct ArrayView {
  std::string name;
  std::vector<std::size_t> shape;
  double* data = nullptr;
  std::size_t size = 0;
};

}  // namespace endoxai::model
