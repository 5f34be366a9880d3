#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include <nlohmann/json.hpp>

#include "endoxai/core/error.hpp"
#include "endoxai/data/image.hpp"
#include "endoxai/data/preprocess.hpp"
#include "endoxai/explain/kernel.hpp"
#include "endoxai/explain/perturb.hpp"
#include "endoxai/explain/ridge.hpp"
#include "endoxai/explain/segmentation.hpp"
#include "endoxai/model/classifier.hpp"

namespace endoxai::explain {

struct LimeConfig {
  int num_samples = 1000;
  int num_features = 5;
  bool positive_only = true;
  double hide_color = 0.0;
  double min_weight = 0.0;
  double kernel_width = 0.0;  // 0 means the 0.25 * sqrt(d) default
  double ridge_lambda = 1.0;
  std::uint64_t seed = 42;
  int predict_batch_size = 64;
  SegmentationParams segmentation;

  void validate() const {
    if (num_samples < 1) throw ConfigError("lime num_samples must be >= 1");
    if (num_features < 1) throw ConfigError("lime num_features must be >= 1");
    if (kernel_width < 0.0) throw ConfigError("lime kernel_width must be >= 0");
    if (ridge_lambda < 0.0) throw ConfigError("lime ridge_lambda must be >= 0");
    if (predict_batch_size < 1) throw ConfigError("lime predict_batch_size must be >= 1");
    segmentation.validate();
  }
};

struct Explanation {
  std::vector<double> segment_weights;  // surrogate coefficients, one per segment
  std::vector<int> selected_segments;   // descending importance
  int predicted_class = 0;
  double surrogate_intercept = 0;
  double local_fidelity = 0;
  int segment_count = 0;
  double kernel_width_used = 0;
  std::vector<std::string> warnings;
};

/// Candidates are the strictly-above-min_weight coefficients under
/// positive_only, otherwise all; ranked by coefficient (positive_only) or by
/// magnitude, descending, ties to the lower segment id.
inline std::vector<int> select_features(const Eigen::VectorXd& coefficients,
                                        int num_features, bool positive_only,
                                        double min_weight) {
  std::vector<int> ids;
  for (int k = 0; k < coefficients.size(); ++k)
    if (!positive_only || coefficients(k) > min_weight) ids.push_back(k);
  auto rank = [&](int k) {
    return positive_only ? coefficients(k) : std::fabs(coefficients(k));
  };
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (rank(a) != rank(b)) return rank(a) > rank(b);
    return a < b;
  });
  if (static_cast<int>(ids.size()) > num_features) ids.resize(num_features);
  return ids;
}

/// Anything that maps an un-normalized image batch to per-class
/// probabilities. The classifier overload below adapts a trained model.
using BatchPredictor = std::function<Eigen::MatrixXd(const data::ImageBatch&)>;

namespace detail {

inline Eigen::MatrixXd predict_masked(const BatchPredictor& predictor,
                                      const data::RawImage& image,
                                      const SegmentMap& segments,
                                      const Eigen::MatrixXd& z, double hide_color,
                                      int batch_size) {
  const int n = static_cast<int>(z.rows());
  Eigen::MatrixXd probs;
  for (int begin = 0; begin < n; begin += batch_size) {
    const int count = std::min(batch_size, n - begin);
    data::ImageBatch batch;
    batch.n = count;
    batch.h = image.h;
    batch.w = image.w;
    batch.training_mode = false;
    batch.pixels.resize(static_cast<std::size_t>(count) * image.h * image.w *
                        data::kChannels);
    for (int i = 0; i < count; ++i) {
      data::RawImage masked = apply_mask(image, segments, z.row(begin + i), hide_color);
      std::copy(masked.v.begin(), masked.v.end(),
                batch.pixels.begin() + static_cast<std::size_t>(i) * masked.v.size());
    }
    Eigen::MatrixXd p = predictor(batch);
    if (p.rows() != count)
      throw ContractError("explain: predictor returned wrong row count");
    if (probs.size() == 0)
      probs.resize(n, p.cols());
    else if (p.cols() != probs.cols())
      throw ContractError("explain: predictor changed class count");
    probs.middleRows(begin, count) = p;
  }
  return probs;
}

inline int argmax_lowest(const Eigen::MatrixXd& m, Eigen::Index row) {
  int best = 0;
  double best_v = m(row, 0);
  for (Eigen::Index c = 1; c < m.cols(); ++c)
    if (m(row, c) > best_v) {
      best_v = m(row, c);
      best = static_cast<int>(c);
    }
  return best;
}

}  // namespace detail

/// segment -> sample -> mask -> predict -> kernel-weight -> ridge surrogate
/// -> feature selection, deterministic under (image, predictor, config).
inline Explanation explain_instance(const BatchPredictor& predictor,
                                    const data::RawImage& image,
                                    const LimeConfig& config,
                                    const SegmentMap* precomputed_segments = nullptr) {
  config.validate();
  SegmentMap local;
  const SegmentMap* segments = precomputed_segments;
  if (!segments) {
    local = segment_image(image, config.segmentation);
    segments = &local;
  }
  const int d = segments->segment_count;

  Explanation ex;
  ex.segment_count = d;
  if (d == 1)
    ex.warnings.push_back("degenerate segmentation: one segment covers the image");
  if (image.h == data::kInputHeight && image.w == data::kInputWidth &&
      (d < 10 || d > 200) && d != 1)
    ex.warnings.push_back("segment count " + std::to_string(d) +
                          " outside the expected 10..200 band");

  Eigen::MatrixXd z = sample_perturbations(d, config.num_samples, config.seed);
  Eigen::MatrixXd probs = detail::predict_masked(predictor, image, *segments, z,
                                                 config.hide_color,
                                                 config.predict_batch_size);
  if (probs.cols() < 1) throw ContractError("explain: predictor returned no classes");
  ex.predicted_class = detail::argmax_lowest(probs, 0);
  Eigen::VectorXd y = probs.col(ex.predicted_class);

  ex.kernel_width_used =
      config.kernel_width > 0.0 ? config.kernel_width : default_kernel_width(d);
  Eigen::VectorXd weights(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    weights(i) = kernel_weight(z.row(i), ex.kernel_width_used);

  SurrogateFit fit = fit_surrogate(z, y, weights, config.ridge_lambda);
  ex.surrogate_intercept = fit.intercept;
  ex.local_fidelity = fit.local_fidelity;
  ex.segment_weights.assign(fit.coefficients.data(), fit.coefficients.data() + d);
  ex.selected_segments = select_features(fit.coefficients, config.num_features,
                                         config.positive_only, config.min_weight);
  return ex;
}

/// Adapt a trained classifier: applies the stored normalization in eval mode,
/// then predicts.
inline BatchPredictor classifier_predictor(model::ClassifierModel& model,
                                           const data::PreprocessConfig& preprocess) {
  return [&model, preprocess](const data::ImageBatch& batch) {
    data::ImageBatch prepared = data::preprocess(batch, preprocess, false, 0, 0);
    return model.predict(prepared);
  };
}

inline nlohmann::json explanation_json(const Explanation& ex, const LimeConfig& config,
                                       const std::string& source_image,
                                       const std::string& predicted_class_name = "") {
  nlohmann::json j;
  j["source_image"] = source_image;
  j["predicted_class"] = ex.predicted_class;
  if (!predicted_class_name.empty()) j["predicted_class_name"] = predicted_class_name;
  j["segment_count"] = ex.segment_count;
  j["selected_segments"] = ex.selected_segments;
  j["segment_weights"] = ex.segment_weights;
  j["surrogate_intercept"] = ex.surrogate_intercept;
  j["local_fidelity"] = ex.local_fidelity;
  j["warnings"] = ex.warnings;
  j["config"] = {{"num_samples", config.num_samples},
                 {"num_features", config.num_features},
                 {"positive_only", config.positive_only},
                 {"hide_color", config.hide_color},
                 {"min_weight", config.min_weight},
                 {"kernel_width", ex.kernel_width_used},
                 {"ridge_lambda", config.ridge_lambda},
                 {"seed", config.seed},
                 {"segmentation",
                  {{"kernel_size", config.segmentation.kernel_size},
                   {"max_dist", config.segmentation.max_dist},
                   {"ratio", config.segmentation.ratio}}}};
  return j;
}

}  // namespace endoxai::explain
