#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "endoxai/core/error.hpp"
#include "endoxai/core/rng.hpp"
#include "endoxai/data/image.hpp"
#include "endoxai/explain/segmentation.hpp"

namespace endoxai::explain {

/// Row 0 is the all-ones original; the rest are iid fair coin flips from a
/// counter RNG, so any prediction order reproduces the same matrix.
inline Eigen::MatrixXd sample_perturbations(int d, int num_samples,
                                            std::uint64_t seed) {
  if (d < 1) throw ContractError("sample_perturbations: d must be >= 1");
  if (num_samples < 1) throw ContractError("sample_perturbations: need >= 1 sample");
  Eigen::MatrixXd z(num_samples, d);
  z.row(0).setOnes();
  for (int i = 1; i < num_samples; ++i)
    for (int j = 0; j < d; ++j)
      z(i, j) = rng::unit_at(rng::kStreamPerturb, seed, static_cast<std::uint64_t>(i),
                             static_cast<std::uint64_t>(j)) < 0.5
                    ? 1.0
                    : 0.0;
  return z;
}

/// Keep segment pixels where z is 1; everywhere else all three channels take
/// hide_color.
inline data::RawImage apply_mask(const data::RawImage& image, const SegmentMap& segments,
                                 const Eigen::RowVectorXd& z, double hide_color = 0.0) {
  if (segments.h != image.h || segments.w != image.w)
    throw ContractError("apply_mask: segment map does not match image");
  if (static_cast<int>(z.size()) != segments.segment_count)
    throw ContractError("apply_mask: mask length != segment count");
  data::RawImage out(image.h, image.w);
  const float hide = static_cast<float>(hide_color);
  for (int y = 0; y < image.h; ++y)
    for (int x = 0; x < image.w; ++x) {
      const bool keep = z(segments.at(y, x)) != 0.0;
      for (int c = 0; c < data::kChannels; ++c)
        out.at(y, x, c) = keep ? image.at(y, x, c) : hide;
    }
  return out;
}

}  // namespace endoxai::explain
