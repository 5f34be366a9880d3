#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "endoxai/core/error.hpp"
#include "endoxai/data/loader.hpp"
#include "endoxai/data/preprocess.hpp"
#include "endoxai/data/splits.hpp"
#include "endoxai/metrics/classification.hpp"
#include "endoxai/metrics/confusion.hpp"
#include "endoxai/model/classifier.hpp"

namespace endoxai::metrics {

/// First maximum wins, so ties resolve to the lowest class index.
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

struct EvaluationResult {
  MetricsReport report;
  ConfusionMatrix cm;
  std::vector<int> y_true, y_pred;
};

struct EvaluateOptions {
  data::Split split = data::Split::test;
  int batch_size = 64;
  Averaging averaging = Averaging::kWeighted;
  data::PreprocessConfig preprocess;
  std::uint64_t seed = 0;
};

/// Deterministic inference over the split in manifest order. Only the predict
/// calls sit inside the timed region; decoding and bookkeeping do not.
inline EvaluationResult evaluate(model::ClassifierModel& model,
                                 const data::SplitManifest& manifest,
                                 const EvaluateOptions& opts = {}) {
  if (opts.batch_size < 1) throw ContractError("evaluate: batch_size must be >= 1");
  std::size_t n = manifest.split_size(opts.split);
  if (n == 0)
    throw ContractError("evaluate: empty split " + std::string(data::split_name(opts.split)));

  const std::size_t batch_size = static_cast<std::size_t>(opts.batch_size);
  const std::size_t batches = (n + batch_size - 1) / batch_size;
  std::vector<int> y_true, y_pred;
  y_true.reserve(n);
  y_pred.reserve(n);
  double inference_seconds = 0;

  for (std::size_t b = 0; b < batches; ++b) {
    data::ImageBatch batch = data::load_batch(manifest, opts.split, b, opts.batch_size);
    batch = data::preprocess(std::move(batch), opts.preprocess, false, opts.seed, 0);
    const auto t0 = std::chrono::steady_clock::now();
    Eigen::MatrixXd probs = model.predict(batch);
    inference_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (int i = 0; i < batch.n; ++i) {
      y_pred.push_back(argmax_lowest(probs, i));
      int truth = -1;
      for (int c = 0; c < batch.num_classes; ++c)
        if (batch.labels[static_cast<std::size_t>(i) * batch.num_classes + c] == 1.f)
          truth = c;
      if (truth < 0) throw ContractError("evaluate: sample without a label");
      y_true.push_back(truth);
    }
  }

  EvaluationResult result;
  result.y_true = std::move(y_true);
  result.y_pred = std::move(y_pred);
  result.cm = confusion_matrix(result.y_true, result.y_pred,
                               static_cast<int>(manifest.class_names.size()),
                               manifest.class_names);
  result.report = classification_metrics(result.cm, opts.averaging);
  result.report.parameter_count = model.parameter_count();
  result.report.inference_time_s = inference_seconds;
  return result;
}

}  // namespace endoxai::metrics
