#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "endoxai/core/error.hpp"
#include "endoxai/core/fsio.hpp"
#include "endoxai/model/classifier.hpp"

namespace endoxai::model {

inline constexpr char kCheckpointMagic[8] = {'E', 'X', 'A', 'I', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double v) {
  static_assert(sizeof(double) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

class ByteReader {
 public:
  explicit ByteReader(const std::string& bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte()) << (8 * i);
    return v;
  }

  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte()) << (8 * i);
    return v;
  }

  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }

  std::string raw(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw DataError("checkpoint truncated");
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  unsigned char byte() {
    if (pos_ >= bytes_.size()) throw DataError("checkpoint truncated");
    return static_cast<unsigned char>(bytes_[pos_++]);
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

struct CheckpointMeta {
  std::string backbone_id;
  HeadConfig head;
  bool trainable_backbone = false;
  std::uint64_t seed = 0;
  std::vector<std::string> class_names;
  double norm_scale = 1.0;
  double norm_offset = 0.0;
};

inline std::string encode_weights(ClassifierModel& model) {
  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  detail::put_u32(out, kCheckpointVersion);
  auto views = model.arrays();
  detail::put_u32(out, static_cast<std::uint32_t>(views.size()));
  for (const auto& a : views) {
    detail::put_u32(out, static_cast<std::uint32_t>(a.name.size()));
    out += a.name;
    detail::put_u32(out, static_cast<std::uint32_t>(a.shape.size()));
    for (std::size_t d : a.shape) detail::put_u64(out, d);
    for (std::size_t i = 0; i < a.size; ++i) detail::put_f64(out, a.data[i]);
  }
  return out;
}

inline void decode_weights_into(const std::string& bytes, ClassifierModel& model) {
  detail::ByteReader r(bytes);
  if (r.raw(8) != std::string(kCheckpointMagic, 8))
    throw DataError("not a checkpoint file");
  if (r.u32() != kCheckpointVersion)
    throw DataError("unsupported checkpoint version");
  auto views = model.arrays();
  std::uint32_t count = r.u32();
  if (count != views.size())
    throw DataError("checkpoint array count does not match model");
  for (auto& a : views) {
    std::string name = r.raw(r.u32());
    if (name != a.name)
      throw DataError("checkpoint array order mismatch: expected " + a.name +
                      ", found " + name);
    std::uint32_t ndim = r.u32();
    if (ndim != a.shape.size()) throw DataError("checkpoint rank mismatch for " + a.name);
    for (std::size_t d = 0; d < ndim; ++d)
      if (r.u64() != a.shape[d]) throw DataError("checkpoint shape mismatch for " + a.name);
    for (std::size_t i = 0; i < a.size; ++i) a.data[i] = r.f64();
  }
  if (!r.done()) throw DataError("trailing bytes after checkpoint payload");
}

inline nlohmann::json checkpoint_sidecar(ClassifierModel& model, const CheckpointMeta& meta) {
  const HeadConfig& h = meta.head;
  nlohmann::json j;
  j["format"] = "endoxai-checkpoint";
  j["version"] = kCheckpointVersion;
  j["backbone"] = meta.backbone_id;
  j["trainable_backbone"] = meta.trainable_backbone;
  j["seed"] = meta.seed;
  j["class_names"] = meta.class_names;
  j["parameter_count"] = model.parameter_count();
  j["normalization"] = {{"scale", meta.norm_scale}, {"offset", meta.norm_offset}};
  j["head"] = {{"dense_units", h.dense_units},
               {"dropout_rate", h.dropout_rate},
               {"l2_kernel", h.l2_kernel},
               {"l1_activity", h.l1_activity},
               {"l1_bias", h.l1_bias},
               {"bn_momentum", h.bn_momentum},
               {"bn_epsilon", h.bn_epsilon},
               {"num_classes", h.num_classes}};
  return j;
}

inline void save_checkpoint(ClassifierModel& model, const CheckpointMeta& meta,
                            const std::string& bin_path, const std::string& json_path) {
  fsio::atomic_write(bin_path, encode_weights(model));
  fsio::atomic_write(json_path, checkpoint_sidecar(model, meta).dump(2) + "\n");
}

struct LoadedCheckpoint {
  ClassifierModel model;
  CheckpointMeta meta;
};

/// Rebuild the model described by the sidecar and fill in saved weights.
inline LoadedCheckpoint load_checkpoint(const std::string& bin_path,
                                        const std::string& json_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(fsio::read_file(json_path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad checkpoint sidecar " + json_path + ": " + e.what());
  }
  CheckpointMeta meta;
  try {
    if (j.at("format") != "endoxai-checkpoint")
      throw DataError("not a checkpoint sidecar: " + json_path);
    meta.backbone_id = j.at("backbone").get<std::string>();
    meta.trainable_backbone = j.at("trainable_backbone").get<bool>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.class_names = j.at("class_names").get<std::vector<std::string>>();
    meta.norm_scale = j.at("normalization").at("scale").get<double>();
    meta.norm_offset = j.at("normalization").at("offset").get<double>();
    const auto& h = j.at("head");
    meta.head.dense_units = h.at("dense_units").get<int>();
    meta.head.dropout_rate = h.at("dropout_rate").get<double>();
    meta.head.l2_kernel = h.at("l2_kernel").get<double>();
    meta.head.l1_activity = h.at("l1_activity").get<double>();
    meta.head.l1_bias = h.at("l1_bias").get<double>();
    meta.head.bn_momentum = h.at("bn_momentum").get<double>();
    meta.head.bn_epsilon = h.at("bn_epsilon").get<double>();
    meta.head.num_classes = h.at("num_classes").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad checkpoint sidecar " + json_path + ": " + e.what());
  }
  ClassifierModel model = build_classifier(meta.backbone_id, meta.head,
                                           meta.trainable_backbone, meta.seed);
  decode_weights_into(fsio::read_file(bin_path), model);
  return {std::move(model), std::move(meta)};
}

}  // namespace endoxai::model
