#pragma once

#include <cstdint>

#include "endoxai/core/rng.hpp"
#include "endoxai/data/image.hpp"

namespace endoxai::data {

// The backbone family's published input convention is raw 0..255 floats, so
// the default map is pass-through. The map in force is echoed into run
// metadata so results stay attributable.
struct PreprocessConfig {
  bool flip_enabled = true;       // training split only; never applies at eval
  double flip_probability = 0.5;
  double norm_scale = 1.0;        // pixel -> pixel * scale + offset
  double norm_offset = 0.0;
};

/// Flip decisions are drawn from a counter RNG keyed by (seed, epoch, record
/// index), so results do not depend on prefetch order or threading.
inline bool should_flip(std::uint64_t seed, std::uint64_t epoch,
                        std::uint64_t record_index, double flip_probability) {
  return rng::unit_at(rng::kStreamFlip, seed, epoch, record_index) < flip_probability;
}

inline ImageBatch preprocess(ImageBatch batch, const PreprocessConfig& config,
                             bool training_mode, std::uint64_t seed,
                             std::uint64_t epoch) {
  batch.training_mode = training_mode;
  if (training_mode && config.flip_enabled) {
    for (int i = 0; i < batch.n; ++i) {
      std::uint64_t record_index =
          i < static_cast<int>(batch.record_indices.size()) ? batch.record_indices[i] : static_cast<std::uint64_t>(i);
      if (should_flip(seed, epoch, record_index, config.flip_probability))
        flip_horizontal(batch, i);
    }
  }
  if (config.norm_scale != 1.0 || config.norm_offset != 0.0) {
    const float scale = static_cast<float>(config.norm_scale);
    const float offset = static_cast<float>(config.norm_offset);
    for (float& p : batch.pixels) p = p * scale + offset;
  }
  return batch;
}

}  // namespace endoxai::data
