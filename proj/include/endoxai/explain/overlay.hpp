#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "endoxai/core/error.hpp"
#include "endoxai/core/fsio.hpp"
#include "endoxai/data/image.hpp"
#include "endoxai/explain/lime.hpp"
#include "endoxai/explain/segmentation.hpp"

namespace endoxai::explain {

inline unsigned char clamp_u8(float v) {
  return static_cast<unsigned char>(std::lround(std::clamp(v, 0.f, 255.f)));
}

inline cv::Mat to_bgr8(const data::RawImage& image) {
  cv::Mat bgr(image.h, image.w, CV_8UC3);
  for (int y = 0; y < image.h; ++y) {
    cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.w; ++x)
      row[x] = {clamp_u8(image.at(y, x, 2)), clamp_u8(image.at(y, x, 1)),
                clamp_u8(image.at(y, x, 0))};
  }
  return bgr;
}

/// Selected segments get a yellow tint and a pure-yellow boundary; every
/// other pixel is byte-identical to the raw rendering.
inline cv::Mat render_overlay(const data::RawImage& image, const SegmentMap& segments,
                              const Explanation& explanation) {
  if (segments.h != image.h || segments.w != image.w)
    throw ContractError("render_overlay: segment map does not match image");
  for (int id : explanation.selected_segments)
    if (id < 0 || id >= segments.segment_count)
      throw ContractError("render_overlay: selected segment out of range");

  std::vector<char> selected(static_cast<std::size_t>(segments.segment_count), 0);
  for (int id : explanation.selected_segments) selected[static_cast<std::size_t>(id)] = 1;

  cv::Mat out = to_bgr8(image);
  const cv::Vec3b yellow(0, 255, 255);  // BGR
  for (int y = 0; y < image.h; ++y) {
    cv::Vec3b* row = out.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.w; ++x) {
      const int id = segments.at(y, x);
      if (!selected[static_cast<std::size_t>(id)]) continue;
      const bool edge = y == 0 || y == image.h - 1 || x == 0 || x == image.w - 1 ||
                        segments.at(y - 1, x) != id || segments.at(y + 1, x) != id ||
                        segments.at(y, x - 1) != id || segments.at(y, x + 1) != id;
      if (edge) {
        row[x] = yellow;
      } else {
        for (int c = 0; c < 3; ++c)
          row[x][c] = static_cast<unsigned char>((2 * row[x][c] + yellow[c]) / 3);
      }
    }
  }
  return out;
}

inline void write_png_atomic(const cv::Mat& img, const std::string& path) {
  std::vector<unsigned char> bytes;
  if (!cv::imencode(".png", img, bytes)) throw Error("failed to encode png: " + path);
  fsio::atomic_write(path, std::string(bytes.begin(), bytes.end()));
}

struct ExplanationPaths {
  std::string raw_png, lime_png, sidecar_json;
};

/// The per-instance artifact triple: `<stem>_raw.png`, `<stem>_lime.png`,
/// `<stem>_explanation.json`.
inline ExplanationPaths write_explanation_artifacts(
    const std::string& dir, const std::string& stem, const data::RawImage& image,
    const SegmentMap& segments, const Explanation& explanation,
    const LimeConfig& config, const std::string& source_image,
    const std::string& predicted_class_name = "") {
  ExplanationPaths paths{dir + "/" + stem + "_raw.png", dir + "/" + stem + "_lime.png",
                         dir + "/" + stem + "_explanation.json"};
  write_png_atomic(to_bgr8(image), paths.raw_png);
  write_png_atomic(render_overlay(image, segments, explanation), paths.lime_png);
  fsio::atomic_write(
      paths.sidecar_json,
      explanation_json(explanation, config, source_image, predicted_class_name).dump(2) +
          "\n");
  return paths;
}

}  // namespace endoxai::explain
