#pragma once

// Deterministic synthetic corpora for integration tests. Class identity is
// painted into per-strip color means, which is exactly what the stub
// backbone extracts, so the desk-scale corpus is separable by construction
// (certified by the softmax-regression oracle, not assumed).

#include <filesystem>
#include <string>
#include <vector>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/core.hpp>

#include "endoxai/core/rng.hpp"

namespace toycorpus {

struct Spec {
  int per_class = 20;
  int height = 48;
  int width = 48;
  std::uint64_t seed = 7;
  std::vector<std::string> class_names = {"cecum", "polyps", "ulcer"};
};

// Left half carries the class color, right half a shared grey; every image
// gets its own brightness jitter plus light per-pixel noise.
inline void write_toy_corpus(const std::string& root, const Spec& spec = {}) {
  namespace fs = std::filesystem;
  const int bases[][3] = {{200, 60, 60}, {60, 200, 60}, {60, 60, 200},
                          {200, 200, 60}, {200, 60, 200}, {60, 200, 200}};
  for (std::size_t c = 0; c < spec.class_names.size(); ++c) {
    fs::create_directories(fs::path(root) / spec.class_names[c]);
    for (int i = 0; i < spec.per_class; ++i) {
      endoxai::rng::Stream stream(
          endoxai::rng::mix(spec.seed, static_cast<std::uint64_t>(c),
                            static_cast<std::uint64_t>(i)));
      double jitter = stream.next_range(-25.0, 25.0);
      cv::Mat img(spec.height, spec.width, CV_8UC3);
      for (int y = 0; y < spec.height; ++y)
        for (int x = 0; x < spec.width; ++x) {
          bool left = x < spec.width / 2;
          const int* base = bases[c % 6];
          double noise = stream.next_range(-8.0, 8.0);
          double r = (left ? base[0] : 120) + jitter + noise;
          double g = (left ? base[1] : 120) + jitter + noise;
          double b = (left ? base[2] : 120) + jitter + noise;
          auto clamp = [](double v) {
            return static_cast<unsigned char>(v < 0 ? 0 : v > 255 ? 255 : v + 0.5);
          };
          img.at<cv::Vec3b>(y, x) = {clamp(b), clamp(g), clamp(r)};  // BGR on disk
        }
      char name[64];
      std::snprintf(name, sizeof name, "img_%03d.png", i);
      cv::imwrite((fs::path(root) / spec.class_names[c] / name).string(), img);
    }
  }
}

// A fresh scratch dir under the system temp root; unique per tag.
inline std::string scratch_dir(const std::string& tag) {
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() / ("endoxai_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

}  // namespace toycorpus
