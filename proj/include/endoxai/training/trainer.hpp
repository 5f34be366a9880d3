#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "endoxai/core/error.hpp"
#include "endoxai/core/rng.hpp"
#include "endoxai/data/loader.hpp"
#include "endoxai/data/preprocess.hpp"
#include "endoxai/data/splits.hpp"
#include "endoxai/model/classifier.hpp"
#include "endoxai/training/adamax.hpp"
#include "endoxai/training/callbacks.hpp"
#include "endoxai/training/control.hpp"
#include "endoxai/training/loss.hpp"
#include "endoxai/training/policy.hpp"

namespace endoxai::training {

struct EpochRecord {
  int epoch = 0;  // 1-based
  double loss = 0, accuracy = 0, val_loss = 0, val_accuracy = 0;
  double learning_rate = 0;
  double duration_s = 0;
};

struct TrainingHistory {
  std::vector<EpochRecord> records;
};

struct TrainOptions {
  TrainingPolicy policy;
  data::PreprocessConfig preprocess;
  std::uint64_t seed = 42;
  ControlChannel* control = nullptr;  // null means non-interactive
  std::ostream* log = nullptr;
  double prompt_timeout_seconds = 30.0;
};

struct TrainReport {
  TrainingHistory history;
  std::string stop_reason;  // completed | early_stop | manual_stop | nan_abort
  bool aborted = false;
  std::vector<std::string> monitor_log;  // monitor in force, one per epoch
  std::string final_monitor;
  double best_value = 0;
  int best_epoch = 0;
  double final_learning_rate = 0;
  int epochs_planned = 0;  // after any manual extensions
  double total_duration_s = 0;
};

namespace detail {

struct PassStats {
  double loss = 0, accuracy = 0;
};

inline int argmax_row(const Eigen::MatrixXd& m, Eigen::Index row) {
  int best = 0;
  double best_v = m(row, 0);
  for (Eigen::Index c = 1; c < m.cols(); ++c)
    if (m(row, c) > best_v) {
      best_v = m(row, c);
      best = static_cast<int>(c);
    }
  return best;
}

inline int correct_count(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& y) {
  int correct = 0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i)
    if (argmax_row(probs, i) == argmax_row(y, i)) ++correct;
  return correct;
}

inline std::string format_epoch_line(const EpochRecord& r, int planned) {
  char buf[192];
  std::snprintf(buf, sizeof buf,
                "epoch %d/%d  loss %.4f  acc %.4f  val_loss %.4f  val_acc %.4f  "
                "lr %.6g  %.3fs",
                r.epoch, planned, r.loss, r.accuracy, r.val_loss, r.val_accuracy,
                r.learning_rate, r.duration_s);
  return buf;
}

}  // namespace detail

/// Full-batch validation pass in eval mode; loss includes the head penalties,
/// matching what training optimizes.
inline detail::PassStats evaluate_split(model::ClassifierModel& model,
                                        const data::SplitManifest& manifest,
                                        data::Split split, const TrainOptions& opts,
                                        int epoch) {
  std::size_t n = manifest.split_size(split);
  if (n == 0) throw ContractError("evaluate_split: empty split");
  std::size_t batches = data::num_batches(manifest, split, opts.policy.batch_size);
  double loss_sum = 0;
  long long correct = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    data::ImageBatch batch =
        data::load_batch(manifest, split, b, opts.policy.batch_size);
    batch = data::preprocess(std::move(batch), opts.preprocess, false, opts.seed,
                             static_cast<std::uint64_t>(epoch));
    auto ev = model.forward_eval(batch);
    Eigen::MatrixXd y = model::labels_matrix(batch);
    double batch_loss = categorical_crossentropy(y, ev.probs) +
                        model.regularization_loss(ev.activity_l1_sum);
    if (!std::isfinite(batch_loss)) throw NumericError("non-finite validation loss");
    loss_sum += batch_loss * batch.n;
    correct += detail::correct_count(ev.probs, y);
  }
  return {loss_sum / static_cast<double>(n),
          static_cast<double>(correct) / static_cast<double>(n)};
}

/// The compile-and-fit procedure: epoch passes over the train split in
/// manifest order (optionally shuffled), Adamax updates, a validation pass,
/// then the callback chain select_monitor -> snapshot_best ->
/// reduce_lr_on_plateau -> early_stop_check -> manual_control_prompt.
/// The model is left holding the best snapshot on every path out.
inline TrainReport train(model::ClassifierModel& model,
                         const data::SplitManifest& manifest,
                         const TrainOptions& opts) {
  opts.policy.validate();
  const std::size_t n_train = manifest.split_size(data::Split::train);
  const std::size_t n_val = manifest.split_size(data::Split::val);
  if (n_train == 0 || n_val == 0)
    throw ContractError("train requires nonempty train and val splits");

  TrainReport report;
  report.epochs_planned = opts.policy.epochs;
  report.final_learning_rate = opts.policy.learning_rate;

  Adamax optimizer(opts.policy.adamax);
  CallbackState cb = make_callback_state(opts.policy);
  double lr = opts.policy.learning_rate;
  const std::size_t batch_size = static_cast<std::size_t>(opts.policy.batch_size);
  const auto run_start = std::chrono::steady_clock::now();

  auto finish = [&](const std::string& reason, bool aborted) {
    report.stop_reason = reason;
    report.aborted = aborted;
    if (!cb.best_weights.empty()) model.restore_weights(cb.best_weights);
    report.final_monitor = monitor_name(cb.monitored_metric);
    report.best_value = cb.best_value;
    report.best_epoch = cb.best_epoch;
    report.final_learning_rate = lr;
    report.total_duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start)
            .count();
    return report;
  };

  int planned = opts.policy.epochs;
  for (int e = 0; e < planned; ++e) {
    const auto epoch_start = std::chrono::steady_clock::now();
    const double lr_used = lr;

    std::vector<std::size_t> order = data::identity_order(n_train);
    if (opts.policy.shuffle) {
      rng::Stream stream(rng::mix(rng::kStreamOrder, opts.seed,
                                  static_cast<std::uint64_t>(e)));
      rng::shuffle(order, stream);
    }

    double loss_sum = 0;
    long long correct = 0;
    const std::size_t train_batches = (n_train + batch_size - 1) / batch_size;
    try {
      for (std::size_t b = 0; b < train_batches; ++b) {
        data::ImageBatch batch = data::load_batch_ordered(
            manifest, data::Split::train, order, b * batch_size, batch_size);
        batch = data::preprocess(std::move(batch), opts.preprocess, true, opts.seed,
                                 static_cast<std::uint64_t>(e));
        model::DropoutKey key{opts.seed, static_cast<std::uint64_t>(e),
                              static_cast<std::uint64_t>(b)};
        auto cache = model.forward_train(batch, key);
        Eigen::MatrixXd y = model::labels_matrix(batch);
        double batch_loss = categorical_crossentropy(y, cache.probs) +
                            model.regularization_loss(cache.a1.array().abs().sum());
        if (!std::isfinite(batch_loss)) throw NumericError("non-finite training loss");
        model.backward(cache, y);
        optimizer.step(model.trainable_parameters(), lr);
        loss_sum += batch_loss * batch.n;
        correct += detail::correct_count(cache.probs, y);
      }
    } catch (const NumericError& err) {
      if (opts.log) *opts.log << "aborting: " << err.what() << "\n";
      return finish("nan_abort", true);
    }

    EpochRecord rec;
    rec.epoch = e + 1;
    rec.loss = loss_sum / static_cast<double>(n_train);
    rec.accuracy = static_cast<double>(correct) / static_cast<double>(n_train);
    rec.learning_rate = lr_used;
    try {
      detail::PassStats val = evaluate_split(model, manifest, data::Split::val, opts, e);
      rec.val_loss = val.loss;
      rec.val_accuracy = val.accuracy;
    } catch (const NumericError& err) {
      if (opts.log) *opts.log << "aborting: " << err.what() << "\n";
      return finish("nan_abort", true);
    }
    rec.duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_start)
            .count();
    cb.epoch_durations.push_back(rec.duration_s);

    Monitor mon = select_monitor(cb, rec.accuracy, opts.policy.accuracy_threshold,
                                 opts.policy);
    report.monitor_log.emplace_back(monitor_name(mon));
    const double mon_value =
        mon == Monitor::kTrainAccuracy ? rec.accuracy : rec.val_loss;
    snapshot_best(cb, model, mon_value, opts.policy.min_delta, rec.epoch);
    const double lr_metric =
        cb.lr_monitored == Monitor::kTrainAccuracy ? rec.accuracy : rec.val_loss;
    lr = reduce_lr_on_plateau(cb, lr_metric, lr, opts.policy);

    report.history.records.push_back(rec);
    if (opts.log) *opts.log << detail::format_epoch_line(rec, planned) << "\n";

    if (early_stop_check(cb, opts.policy)) return finish("early_stop", false);

    if (opts.control && opts.policy.manual_prompt_interval > 0 &&
        (e + 1) % opts.policy.manual_prompt_interval == 0) {
      double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start)
              .count();
      char status[224];
      std::snprintf(status, sizeof status, "%s  elapsed %.1fs",
                    detail::format_epoch_line(rec, planned).c_str(), elapsed);
      Directive d =
          manual_control_prompt(*opts.control, status, opts.prompt_timeout_seconds);
      if (d.kind == Directive::kStop) {
        cb.stop_requested = true;
        return finish("manual_stop", false);
      }
      if (d.kind == Directive::kExtend) {
        planned += d.extend_epochs;
        report.epochs_planned = planned;
        if (opts.log) *opts.log << "extended to " << planned << " epochs\n";
      }
    }
  }
  return finish("completed", false);
}

/// CSV with the exact header the history artifact promises. Durations are
/// wall-clock and therefore excluded from byte-level reproducibility
/// comparisons.
inline std::string history_csv(const TrainingHistory& history) {
  std::string out = "epoch,loss,accuracy,val_loss,val_accuracy,learning_rate,duration_s\n";
  char buf[224];
  for (const EpochRecord& r : history.records) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.3f\n", r.epoch,
                  r.loss, r.accuracy, r.val_loss, r.val_accuracy, r.learning_rate,
                  r.duration_s);
    out += buf;
  }
  return out;
}

}  // namespace endoxai::training
