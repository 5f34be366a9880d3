#pragma once

#include <cstddef>
#include <vector>

#include "endoxai/core/error.hpp"

namespace endoxai::data {

constexpr int kInputHeight = 224;
constexpr int kInputWidth = 224;
constexpr int kChannels = 3;

// Single RGB image, interleaved float pixels. Values are raw 0..255 until
// normalization is applied.
struct RawImage {
  int h = 0;
  int w = 0;
  std::vector<float> v;  // size h*w*3, index (y*w + x)*3 + c

  RawImage() = default;
  RawImage(int height, int width) : h(height), w(width), v(static_cast<std::size_t>(height) * width * kChannels, 0.f) {}

  float& at(int y, int x, int c) { return v[(static_cast<std::size_t>(y) * w + x) * kChannels + c]; }
  float at(int y, int x, int c) const { return v[(static_cast<std::size_t>(y) * w + x) * kChannels + c]; }
};

// Dense N x H x W x 3 pixel block plus one-hot labels.
struct ImageBatch {
  int n = 0;
  int h = 0;
  int w = 0;
  std::vector<float> pixels;            // (i*h*w + y*w + x)*3 + c
  std::vector<float> labels;            // n * num_classes, one-hot rows
  int num_classes = 0;
  bool training_mode = false;
  std::vector<std::size_t> record_indices;  // position of each image in its split

  float& px(int i, int y, int x, int c) {
    return pixels[((static_cast<std::size_t>(i) * h + y) * w + x) * kChannels + c];
  }
  float px(int i, int y, int x, int c) const {
    return pixels[((static_cast<std::size_t>(i) * h + y) * w + x) * kChannels + c];
  }
};

/// Mirror one image of the batch left-to-right, in place.
inline void flip_horizontal(ImageBatch& batch, int i) {
  for (int y = 0; y < batch.h; ++y)
    for (int x = 0; x < batch.w / 2; ++x)
      for (int c = 0; c < kChannels; ++c)
        std::swap(batch.px(i, y, x, c), batch.px(i, y, batch.w - 1 - x, c));
}

inline RawImage extract_image(const ImageBatch& batch, int i) {
  RawImage img(batch.h, batch.w);
  for (int y = 0; y < batch.h; ++y)
    for (int x = 0; x < batch.w; ++x)
      for (int c = 0; c < kChannels; ++c) img.at(y, x, c) = batch.px(i, y, x, c);
  return img;
}

}  // namespace endoxai::data
