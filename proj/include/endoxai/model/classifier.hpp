#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "endoxai/core/error.hpp"
#include "endoxai/core/rng.hpp"
#include "endoxai/data/image.hpp"
#include "endoxai/model/backbone.hpp"
#include "endoxai/model/layers.hpp"
#include "endoxai/model/ops.hpp"
#include "endoxai/model/penalties.hpp"

namespace endoxai::model {

// Head hyperparameters, all overridable from config.
struct HeadConfig {
  int dense_units = 256;
  double dropout_rate = 0.6;
  double l2_kernel = 0.16;
  double l1_activity = 0.006;
  double l1_bias = 0.06;
  double bn_momentum = 0.99;
  double bn_epsilon = 0.001;
  int num_classes = 8;

  void validate() const {
    if (dropout_rate < 0.0 || dropout_rate >= 1.0)
      throw ConfigError("dropout_rate must satisfy 0 <= rate < 1");
    if (l2_kernel < 0 || l1_activity < 0 || l1_bias < 0)
      throw ConfigError("penalty coefficients must be >= 0");
    if (num_classes < 2) throw ConfigError("num_classes must be >= 2");
    if (dense_units < 1) throw ConfigError("dense_units must be >= 1");
    if (bn_momentum <= 0.0 || bn_momentum >= 1.0)
      throw ConfigError("bn_momentum must be in (0, 1)");
    if (bn_epsilon <= 0.0) throw ConfigError("bn_epsilon must be > 0");
  }
};

inline Eigen::MatrixXd labels_matrix(const data::ImageBatch& batch) {
  Eigen::MatrixXd y(batch.n, batch.num_classes);
  for (int i = 0; i < batch.n; ++i)
    for (int c = 0; c < batch.num_classes; ++c)
      y(i, c) = batch.labels[static_cast<std::size_t>(i) * batch.num_classes + c];
  return y;
}

// backbone -> batch norm -> dense(units, relu; kernel L2, activity L1,
// bias L1) -> dropout -> dense(classes, softmax)
class ClassifierModel {
 public:
  struct TrainForward {
    Eigen::MatrixXd features;
    BatchNorm::Cache bn_cache;
    Eigen::MatrixXd h0;      // after batch norm
    Eigen::MatrixXd z1;      // dense1 pre-activation
    Eigen::MatrixXd a1;      // relu output (the regularized activations)
    DropoutResult dropout;
    Eigen::MatrixXd logits;
    Eigen::MatrixXd probs;
  };

  struct EvalForward {
    Eigen::MatrixXd probs;
    double activity_l1_sum = 0;  // sum |a1| over the batch, pre-lambda
  };

  ClassifierModel(std::shared_ptr<Backbone> backbone, HeadConfig head,
                  bool trainable_backbone, std::uint64_t init_seed)
      : backbone_(std::move(backbone)),
        head_(head),
        trainable_backbone_(trainable_backbone),
        init_seed_(init_seed) {
    head_.validate();
    const int f = backbone_->feature_dim();
    bn_.init(f, head_.bn_momentum, head_.bn_epsilon);
    rng::Stream s1(rng::mix(rng::kStreamInit, init_seed, 1));
    dense1_.init(f, head_.dense_units, s1);
    rng::Stream s2(rng::mix(rng::kStreamInit, init_seed, 2));
    dense2_.init(head_.dense_units, head_.num_classes, s2);
  }

  const std::string& backbone_id() const { return backbone_->id(); }
  const HeadConfig& head() const { return head_; }
  bool trainable_backbone() const { return trainable_backbone_; }
  std::uint64_t init_seed() const { return init_seed_; }
  Backbone& backbone() { return *backbone_; }

  TrainForward forward_train(const data::ImageBatch& batch, const DropoutKey& key) {
    TrainForward cache;
    cache.features = backbone_->forward(batch, trainable_backbone_);
    cache.h0 = bn_.forward_train(cache.features, cache.bn_cache);
    cache.z1 = dense1_.forward(cache.h0);
    cache.a1 = cache.z1.cwiseMax(0.0);
    cache.dropout = dropout_forward(cache.a1, head_.dropout_rate, true, key);
    cache.logits = dense2_.forward(cache.dropout.output);
    cache.probs = softmax(cache.logits);
    return cache;
  }

  EvalForward forward_eval(const data::ImageBatch& batch) {
    EvalForward out;
    Eigen::MatrixXd features = backbone_->forward(batch, false);
    Eigen::MatrixXd h0 = bn_.forward_eval(features);
    Eigen::MatrixXd a1 = dense1_.forward(h0).cwiseMax(0.0);
    out.activity_l1_sum = a1.array().abs().sum();
    out.probs = softmax(dense2_.forward(a1));
    return out;
  }

  /// Eval-mode class probabilities; rows are probability vectors.
  Eigen::MatrixXd predict(const data::ImageBatch& batch) {
    return forward_eval(batch).probs;
  }

  /// kernel-L2 + activity-L1 + bias-L1 of the head dense layer.
  double regularization_loss(double activity_l1_sum) const {
    return l2_penalty(dense1_.w, head_.l2_kernel) +
           head_.l1_activity * activity_l1_sum +
           l1_penalty(dense1_.b, head_.l1_bias);
  }

  /// Mean crossentropy gradient plus all regularizer contributions. Gradients
  /// are zeroed first; one call corresponds to one optimizer step.
  void backward(const TrainForward& cache, const Eigen::MatrixXd& y_true) {
    zero_grad();
    const double n = static_cast<double>(cache.probs.rows());
    Eigen::MatrixXd dlogits = (cache.probs - y_true) / n;
    Eigen::MatrixXd ddropped = dense2_.backward(cache.dropout.output, dlogits);
    Eigen::MatrixXd da1 = ddropped.cwiseProduct(cache.dropout.mask);
    // activity L1 acts on the relu output directly, before dropout
    da1.array() += head_.l1_activity * cache.a1.array().sign();
    Eigen::MatrixXd dz1 =
        (cache.z1.array() > 0.0).select(da1, Eigen::MatrixXd::Zero(da1.rows(), da1.cols()));
    Eigen::MatrixXd dh0 = dense1_.backward(cache.h0, dz1);
    dense1_.dw += 2.0 * head_.l2_kernel * dense1_.w;
    dense1_.db += head_.l1_bias * dense1_.b.array().sign().matrix();
    Eigen::MatrixXd dfeatures = bn_.backward(cache.bn_cache, dh0);
    if (trainable_backbone_) backbone_->backward(dfeatures);
  }

  std::vector<TensorRef> trainable_parameters() {
    std::vector<TensorRef> params;
    if (trainable_backbone_)
      for (auto& p : backbone_->trainable_parameters()) params.push_back(p);
    params.push_back({"bn.gamma", bn_.gamma.data(), bn_.dgamma.data(),
                      static_cast<std::size_t>(bn_.gamma.size())});
    params.push_back({"bn.beta", bn_.beta.data(), bn_.dbeta.data(),
                      static_cast<std::size_t>(bn_.beta.size())});
    params.push_back({"dense1.kernel", dense1_.w.data(), dense1_.dw.data(),
                      static_cast<std::size_t>(dense1_.w.size())});
    params.push_back({"dense1.bias", dense1_.b.data(), dense1_.db.data(),
                      static_cast<std::size_t>(dense1_.b.size())});
    params.push_back({"dense2.kernel", dense2_.w.data(), dense2_.dw.data(),
                      static_cast<std::size_t>(dense2_.w.size())});
    params.push_back({"dense2.bias", dense2_.b.data(), dense2_.db.data(),
                      static_cast<std::size_t>(dense2_.b.size())});
    return params;
  }

  /// Every weight array including moving statistics, for counting and
  /// checkpoints.
  std::vector<ArrayView> arrays() {
    auto vec1 = [](Eigen::VectorXd& v, const char* name) {
      return ArrayView{name, {static_cast<std::size_t>(v.size())}, v.data(),
                       static_cast<std::size_t>(v.size())};
    };
    auto mat = [](Eigen::MatrixXd& m, const char* name) {
      return ArrayView{name,
                       {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
                       m.data(),
                       static_cast<std::size_t>(m.size())};
    };
    std::vector<ArrayView> views = backbone_->arrays();
    views.push_back(vec1(bn_.gamma, "bn.gamma"));
    views.push_back(vec1(bn_.beta, "bn.beta"));
    views.push_back(vec1(bn_.moving_mean, "bn.moving_mean"));
    views.push_back(vec1(bn_.moving_var, "bn.moving_var"));
    views.push_back(mat(dense1_.w, "dense1.kernel"));
    views.push_back(vec1(dense1_.b, "dense1.bias"));
    views.push_back(mat(dense2_.w, "dense2.kernel"));
    views.push_back(vec1(dense2_.b, "dense2.bias"));
    return views;
  }

  long long parameter_count() {
    long long total = 0;
    for (const auto& a : arrays()) total += static_cast<long long>(a.size);
    return total;
  }

  std::vector<std::vector<double>> snapshot_weights() {
    std::vector<std::vector<double>> snap;
    for (const auto& a : arrays()) snap.emplace_back(a.data, a.data + a.size);
    return snap;
  }

  void restore_weights(const std::vector<std::vector<double>>& snap) {
    auto views = arrays();
    if (snap.size() != views.size())
      throw ContractError("restore_weights: array count mismatch");
    for (std::size_t i = 0; i < views.size(); ++i) {
      if (snap[i].size() != views[i].size)
        throw ContractError("restore_weights: size mismatch for " + views[i].name);
      std::copy(snap[i].begin(), snap[i].end(), views[i].data);
    }
  }

  void zero_grad() {
    bn_.zero_grad();
    dense1_.zero_grad();
    dense2_.zero_grad();
    backbone_->zero_grad();
  }

 private:
  std::shared_ptr<Backbone> backbone_;
  HeadConfig head_;
  bool trainable_backbone_;
  std::uint64_t init_seed_;
  BatchNorm bn_;
  Dense dense1_, dense2_;
};

inline ClassifierModel build_classifier(const std::string& backbone_id,
                                        const HeadConfig& head,
                                        bool trainable_backbone,
                                        std::uint64_t seed) {
  head.validate();
  std::shared_ptr<Backbone> backbone =
      build_backbone(backbone_id, seed, trainable_backbone);
  return ClassifierModel(std::move(backbone), head, trainable_backbone, seed);
}

inline long long count_parameters(ClassifierModel& m) { return m.parameter_count(); }

inline long long head_parameter_count(int feature_dim, const HeadConfig& head) {
  long long f = feature_dim, u = head.dense_units, c = head.num_classes;
  return 4 * f + (f * u + u) + (u * c + c);
}

/// Planned total parameter count for a backbone id + head, without building.
inline long long expected_parameter_count(const std::string& backbone_id,
                                          const HeadConfig& head) {
  return backbone_parameter_count(backbone_id) +
         head_parameter_count(backbone_feature_dim(backbone_id), head);
}

}  // namespace endoxai::model
