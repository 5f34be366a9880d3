#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "endoxai/core/error.hpp"
#include "endoxai/data/image.hpp"

namespace endoxai::explain {

// Quickshift-style mode seeking in the joint (x, y, ratio*rgb) space: each
// pixel links to its nearest neighbor of higher kernel density, trees are cut
// at max_dist, and every resulting tree is one superpixel.
struct SegmentationParams {
  double kernel_size = 8.0;  // Parzen density bandwidth, pixels
  double max_dist = 10.0;    // link cutoff in joint feature space
  double ratio = 0.25;       // color weight: feature = ratio * raw channel

  void validate() const {
    if (kernel_size <= 0.0) throw ConfigError("segmentation kernel_size must be > 0");
    if (max_dist <= 0.0) throw ConfigError("segmentation max_dist must be > 0");
    if (ratio < 0.0) throw ConfigError("segmentation ratio must be >= 0");
  }
};

struct SegmentMap {
  int h = 0, w = 0;
  int segment_count = 0;
  std::vector<int> labels;  // row-major, values 0..segment_count-1

  int at(int y, int x) const { return labels[static_cast<std::size_t>(y) * w + x]; }
};

inline SegmentMap segment_image(const data::RawImage& image,
                                const SegmentationParams& params = {}) {
  params.validate();
  const int h = image.h, w = image.w;
  if (h < 1 || w < 1) throw ContractError("segment_image: empty image");
  const int n = h * w;
  const double sigma2_2 = 2.0 * params.kernel_size * params.kernel_size;
  const double r = params.ratio;

  // kernel density over a +/- 2 sigma window
  const int dw = std::max(1, static_cast<int>(std::ceil(2.0 * params.kernel_size)));
  std::vector<double> density(static_cast<std::size_t>(n), 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int qy = std::max(0, y - dw); qy <= std::min(h - 1, y + dw); ++qy)
        for (int qx = std::max(0, x - dw); qx <= std::min(w - 1, x + dw); ++qx) {
          double d2 = static_cast<double>((qy - y) * (qy - y) + (qx - x) * (qx - x));
          for (int c = 0; c < data::kChannels; ++c) {
            double dc = r * (image.at(qy, qx, c) - image.at(y, x, c));
            d2 += dc * dc;
          }
          sum += std::exp(-d2 / sigma2_2);
        }
      density[static_cast<std::size_t>(y) * w + x] = sum;
    }

  // parent = nearest neighbor ranked denser; density ties resolve to the
  // earlier raster pixel so the ordering is strict and the links acyclic
  auto denser = [&](int cand, int self) {
    return density[cand] > density[self] ||
           (density[cand] == density[self] && cand < self);
  };
  const int pw = std::max(1, static_cast<int>(std::ceil(params.max_dist)));
  const double max_d2 = params.max_dist * params.max_dist;
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int self = y * w + x;
      int best = self;
      double best_d2 = max_d2;
      for (int qy = std::max(0, y - pw); qy <= std::min(h - 1, y + pw); ++qy)
        for (int qx = std::max(0, x - pw); qx <= std::min(w - 1, x + pw); ++qx) {
          const int cand = qy * w + qx;
          if (cand == self || !denser(cand, self)) continue;
          double d2 = static_cast<double>((qy - y) * (qy - y) + (qx - x) * (qx - x));
          if (d2 > best_d2) continue;
          for (int c = 0; c < data::kChannels; ++c) {
            double dc = r * (image.at(qy, qx, c) - image.at(y, x, c));
            d2 += dc * dc;
          }
          if (d2 < best_d2 || (d2 == best_d2 && cand < best)) {
            best_d2 = d2;
            best = cand;
          }
        }
      parent[self] = best;  // self when no denser neighbor in range: a root
    }

  // resolve each pixel to its root (paths are strictly density-increasing,
  // so this terminates), then relabel roots in raster order of first use
  std::vector<int> root(static_cast<std::size_t>(n), -1);
  std::vector<int> chain;
  for (int p = 0; p < n; ++p) {
    if (root[p] >= 0) continue;
    chain.clear();
    int q = p;
    while (root[q] < 0 && parent[q] != q) {
      chain.push_back(q);
      q = parent[q];
    }
    int rt = root[q] >= 0 ? root[q] : q;
    root[q] = rt;
    for (int c : chain) root[c] = rt;
  }

  SegmentMap map;
  map.h = h;
  map.w = w;
  map.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> label_of(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int p = 0; p < n; ++p) {
    int rt = root[p];
    if (label_of[rt] < 0) label_of[rt] = next++;
    map.labels[p] = label_of[rt];
  }
  map.segment_count = next;
  return map;
}

}  // namespace endoxai::explain
