#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "endoxai/core/error.hpp"
#include "endoxai/core/rng.hpp"
#include "endoxai/data/image.hpp"
#include "endoxai/model/param.hpp"

namespace endoxai::model {

// Pretrained feature extractor boundary. The classifier head only sees
// N x feature_dim matrices, so anything honoring this interface can sit
// underneath: the builtin pooled-statistics stubs, the trainable linear
// probe, or an externally registered full convolutional network.
class Backbone {
 public:
  virtual ~Backbone() = default;
  virtual const std::string& id() const = 0;
  virtual int feature_dim() const = 0;
  virtual Eigen::MatrixXd forward(const data::ImageBatch& batch, bool training) = 0;
  virtual void backward(const Eigen::MatrixXd& grad_features) { (void)grad_features; }
  virtual std::vector<TensorRef> trainable_parameters() { return {}; }
  virtual std::vector<ArrayView> arrays() { return {}; }
  virtual void zero_grad() {}

  long long parameter_count() {
    long long total = 0;
    for (const auto& a : arrays()) total += static_cast<long long>(a.size);
    return total;
  }
};

namespace detail {

// Mean RGB per vertical strip: `strips * 3` values per image, truncated to
// the requested dimension.
inline Eigen::MatrixXd strip_statistics(const data::ImageBatch& batch, int dim) {
  const int strips = (dim + data::kChannels - 1) / data::kChannels;
  Eigen::MatrixXd features = Eigen::MatrixXd::Zero(batch.n, dim);
  for (int i = 0; i < batch.n; ++i) {
    for (int s = 0; s < strips; ++s) {
      int x0 = s * batch.w / strips;
      int x1 = (s + 1) * batch.w / strips;
      if (x1 <= x0) x1 = x0 + 1;
      double sums[data::kChannels] = {0, 0, 0};
      for (int y = 0; y < batch.h; ++y)
        for (int x = x0; x < x1; ++x)
          for (int c = 0; c < data::kChannels; ++c) sums[c] += batch.px(i, y, x, c);
      const double count = static_cast<double>(batch.h) * (x1 - x0);
      for (int c = 0; c < data::kChannels; ++c) {
        int j = s * data::kChannels + c;
        if (j < dim) features(i, j) = sums[c] / count;
      }
    }
  }
  return features;
}

}  // namespace detail

/// `stub:<d>` — parameter-free pooled color statistics. Deterministic, used
/// by the desk-scale pipeline and tests.
class StripStatsBackbone : public Backbone {
 public:
  StripStatsBackbone(std::string id, int dim) : id_(std::move(id)), dim_(dim) {
    if (dim < 1) throw ConfigError("stub backbone needs >= 1 features");
  }
  const std::string& id() const override { return id_; }
  int feature_dim() const override { return dim_; }
  Eigen::MatrixXd forward(const data::ImageBatch& batch, bool) override {
    return detail::strip_statistics(batch, dim_);
  }

 private:
  std::string id_;
  int dim_;
};

/// `linear:<d>` — seeded linear projection of 12 pooled statistics. The
/// smallest backbone with actual weights; exercises the trainable-backbone
/// path end to end.
class LinearProbeBackbone : public Backbone {
 public:
  static constexpr int kBaseDim = 12;

  LinearProbeBackbone(std::string id, int dim, std::uint64_t seed, bool trainable)
      : id_(std::move(id)), dim_(dim), trainable_(trainable) {
    if (dim < 1) throw ConfigError("linear backbone needs >= 1 features");
    rng::Stream stream(rng::mix(rng::kStreamInit, seed, 0x6c696e65ull));
    const double limit = std::sqrt(6.0 / (kBaseDim + dim));
    w_.resize(kBaseDim, dim);
    for (Eigen::Index j = 0; j < w_.cols(); ++j)
      for (Eigen::Index i = 0; i < w_.rows(); ++i)
        w_(i, j) = stream.next_range(-limit, limit);
    b_ = Eigen::VectorXd::Zero(dim);
    dw_ = Eigen::MatrixXd::Zero(kBaseDim, dim);
    db_ = Eigen::VectorXd::Zero(dim);
  }

  const std::string& id() const override { return id_; }
  int feature_dim() const override { return dim_; }

  Eigen::MatrixXd forward(const data::ImageBatch& batch, bool training) override {
    Eigen::MatrixXd base = detail::strip_statistics(batch, kBaseDim);
    if (training) base_cache_ = base;
    return (base * w_).rowwise() + b_.transpose();
  }

  void backward(const Eigen::MatrixXd& grad_features) override {
    if (!trainable_) return;
    dw_ += base_cache_.transpose() * grad_features;
    db_ += grad_features.colwise().sum().transpose();
  }

  std::vector<TensorRef> trainable_parameters() override {
    if (!trainable_) return {};
    return {{"backbone.kernel", w_.data(), dw_.data(), static_cast<std::size_t>(w_.size())},
            {"backbone.bias", b_.data(), db_.data(), static_cast<std::size_t>(b_.size())}};
  }

  std::vector<ArrayView> arrays() override {
    return {{"backbone.kernel",
             {static_cast<std::size_t>(w_.rows()), static_cast<std::size_t>(w_.cols())},
             w_.data(),
             static_cast<std::size_t>(w_.size())},
            {"backbone.bias", {static_cast<std::size_t>(b_.size())}, b_.data(),
             static_cast<std::size_t>(b_.size())}};
  }

  void zero_grad() override {
    dw_.setZero();
    db_.setZero();
  }

 private:
  std::string id_;
  int dim_;
  bool trainable_;
  Eigen::MatrixXd w_, dw_;
  Eigen::VectorXd b_, db_;
  Eigen::MatrixXd base_cache_;
};

// Published layer bookkeeping for external convolutional families. Building
// one requires a registered plugin; the catalog still answers dimension and
// parameter-count queries so planning and reports work without the weights.
struct BackboneInfo {
  std::string id;
  int feature_dim = 0;
  long long parameter_count = 0;
};

inline const std::vector<BackboneInfo>& external_catalog() {
  static const std::vector<BackboneInfo> catalog = {
      {"efficientnet_b3", 1536, 10'783'535},
  };
  return catalog;
}

inline std::optional<BackboneInfo> catalog_lookup(const std::string& id) {
  for (const auto& info : external_catalog())
    if (info.id == id) return info;
  return std::nullopt;
}

using BackboneFactory =
    std::function<std::unique_ptr<Backbone>(std::uint64_t seed, bool trainable)>;

inline std::map<std::string, BackboneFactory>& backbone_registry() {
  static std::map<std::string, BackboneFactory> registry;
  return registry;
}

/// Plug in an externally implemented backbone (e.g. a converted pretrained
/// network). Registered ids take precedence over builtins.
inline void register_backbone(const std::string& id, BackboneFactory factory) {
  backbone_registry()[id] = std::move(factory);
}

inline std::unique_ptr<Backbone> build_backbone(const std::string& id,
                                                std::uint64_t seed,
                                                bool trainable) {
  auto it = backbone_registry().find(id);
  if (it != backbone_registry().end()) return it->second(seed, trainable);

  auto parse_dim = [&](const std::string& prefix) -> int {
    std::string tail = id.substr(prefix.size());
    try {
      std::size_t pos = 0;
      int dim = std::stoi(tail, &pos);
      if (pos != tail.size() || dim < 1) throw std::invalid_argument("dim");
      return dim;
    } catch (const std::exception&) {
      throw ConfigError("bad backbone dimension in '" + id + "'");
    }
  };
  if (id.rfind("stub:", 0) == 0)
    return std::make_unique<StripStatsBackbone>(id, parse_dim("stub:"));
  if (id.rfind("linear:", 0) == 0)
    return std::make_unique<LinearProbeBackbone>(id, parse_dim("linear:"), seed, trainable);

  if (catalog_lookup(id))
    throw EnvironmentError(
        "backbone '" + id +
        "' is catalogued but its pretrained implementation is not installed; "
        "register a plugin backbone factory or pick a builtin (stub:<d>, linear:<d>)");
  throw ConfigError("unknown backbone id: " + id);
}

/// Feature dimension without building: builtins parse their id, external
/// families come from the catalog.
inline int backbone_feature_dim(const std::string& id) {
  if (id.rfind("stub:", 0) == 0 || id.rfind("linear:", 0) == 0) {
    std::string tail = id.substr(id.find(':') + 1);
    return std::stoi(tail);
  }
  if (auto info = catalog_lookup(id)) return info->feature_dim;
  throw ConfigError("unknown backbone id: " + id);
}

inline long long backbone_parameter_count(const std::string& id) {
  if (id.rfind("stub:", 0) == 0) return 0;
  if (id.rfind("linear:", 0) == 0) {
    long long dim = backbone_feature_dim(id);
    return LinearProbeBackbone::kBaseDim * dim + dim;
  }
  if (auto info = catalog_lookup(id)) return info->parameter_count;
  throw ConfigError("unknown backbone id: " + id);
}

}  // namespace endoxai::model
