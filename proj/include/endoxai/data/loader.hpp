#pragma once

#include <string>
#include <vector>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "endoxai/core/error.hpp"
#include "endoxai/data/image.hpp"
#include "endoxai/data/splits.hpp"

namespace endoxai::data {

inline std::size_t num_batches(const SplitManifest& manifest, Split split,
                               std::size_t batch_size) {
  if (batch_size == 0) throw ContractError("batch_size must be >= 1");
  std::size_t n = manifest.split_size(split);
  return (n + batch_size - 1) / batch_size;
}

/// Decode one file to a raw RGB float image resized to `height` x `width`.
inline RawImage load_image(const std::string& path, int height = kInputHeight,
                           int width = kInputWidth) {
  cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
  if (bgr.empty()) throw DataError("cannot decode image: " + path);
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  cv::Mat rgbf;
  rgb.convertTo(rgbf, CV_32FC3);
  cv::Mat resized;
  if (rgbf.rows == height && rgbf.cols == width)
    resized = rgbf;
  else
    cv::resize(rgbf, resized, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);

  RawImage img(height, width);
  for (int y = 0; y < height; ++y) {
    const cv::Vec3f* row = resized.ptr<cv::Vec3f>(y);
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < kChannels; ++c) img.at(y, x, c) = row[x][c];
  }
  return img;
}

/// Serve split records in the given order, starting at `begin`. The order
/// entries are stable indices into the split's manifest-order record list and
/// are carried into record_indices so augmentation keys follow the record,
/// not its position.
inline ImageBatch load_batch_ordered(const SplitManifest& manifest, Split split,
                                     const std::vector<std::size_t>& order,
                                     std::size_t begin, std::size_t batch_size) {
  if (batch_size == 0) throw ContractError("batch_size must be >= 1");
  auto records = manifest.split_records(split);
  if (begin >= order.size())
    throw ContractError("batch start " + std::to_string(begin) +
                        " out of range for split " + split_name(split));
  std::size_t end = std::min(begin + batch_size, order.size());

  ImageBatch batch;
  batch.n = static_cast<int>(end - begin);
  batch.h = kInputHeight;
  batch.w = kInputWidth;
  batch.num_classes = static_cast<int>(manifest.class_names.size());
  batch.pixels.resize(static_cast<std::size_t>(batch.n) * batch.h * batch.w * kChannels);
  batch.labels.assign(static_cast<std::size_t>(batch.n) * batch.num_classes, 0.f);

  for (std::size_t i = begin; i < end; ++i) {
    std::size_t rec_index = order[i];
    if (rec_index >= records.size())
      throw ContractError(std::string("record index out of range for split ") +
                          split_name(split));
    const ImageRecord& rec = *records[rec_index];
    RawImage img = load_image(rec.path);
    int bi = static_cast<int>(i - begin);
    std::copy(img.v.begin(), img.v.end(),
              batch.pixels.begin() + static_cast<std::size_t>(bi) * img.v.size());
    if (rec.label_index < 0 || rec.label_index >= batch.num_classes)
      throw DataError("record label_index out of range: " + rec.path);
    batch.labels[static_cast<std::size_t>(bi) * batch.num_classes + rec.label_index] = 1.f;
    batch.record_indices.push_back(rec_index);
  }
  return batch;
}

inline std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  return order;
}

/// Assemble batch `batch_index` of `split` in manifest order. The final
/// partial batch is kept so every record is served exactly once per pass.
inline ImageBatch load_batch(const SplitManifest& manifest, Split split,
                             std::size_t batch_index, std::size_t batch_size) {
  if (batch_size == 0) throw ContractError("batch_size must be >= 1");
  std::size_t n = manifest.split_size(split);
  return load_batch_ordered(manifest, split, identity_order(n),
                            batch_index * batch_size, batch_size);
}

}  // namespace endoxai::data
