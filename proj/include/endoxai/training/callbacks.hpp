#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "endoxai/core/error.hpp"
#include "endoxai/model/classifier.hpp"
#include "endoxai/training/policy.hpp"

namespace endoxai::training {

enum class Monitor { kTrainAccuracy, kValLoss };

inline const char* monitor_name(Monitor m) {
  return m == Monitor::kTrainAccuracy ? "train_accuracy" : "val_loss";
}

inline double worst_value(Monitor m) {
  return m == Monitor::kTrainAccuracy ? -std::numeric_limits<double>::infinity()
                                      : std::numeric_limits<double>::infinity();
}

/// Accuracy improves upward, loss improves downward; either way the change
/// must exceed min_delta to count.
inline bool is_improvement(Monitor m, double value, double best, double min_delta) {
  if (m == Monitor::kTrainAccuracy) return value > best + min_delta;
  return value < best - min_delta;
}

struct CallbackState {
  Monitor monitored_metric = Monitor::kTrainAccuracy;
  bool switched = false;
  double best_value = worst_value(Monitor::kTrainAccuracy);
  std::vector<std::vector<double>> best_weights;  // empty until first snapshot
  int best_epoch = 0;
  int epochs_since_improvement = 0;
  // LR plateau tracking runs on its own best so it survives reductions and
  // can watch a different metric than the early-stop monitor.
  Monitor lr_monitored = Monitor::kTrainAccuracy;
  double lr_best_value = worst_value(Monitor::kTrainAccuracy);
  int lr_epochs_since_improvement = 0;
  std::vector<double> epoch_durations;
  bool stop_requested = false;
};

inline CallbackState make_callback_state(const TrainingPolicy& policy) {
  CallbackState st;
  st.monitored_metric = Monitor::kTrainAccuracy;
  st.best_value = worst_value(st.monitored_metric);
  st.lr_monitored = policy.lr_monitor == LrMonitorMode::kValLoss
                        ? Monitor::kValLoss
                        : Monitor::kTrainAccuracy;
  st.lr_best_value = worst_value(st.lr_monitored);
  return st;
}

/// Accuracy rules while <= threshold; once it surpasses the threshold the
/// monitor flips to validation loss for the rest of the run. Flipping resets
/// best tracking so the new metric starts fresh.
inline Monitor select_monitor(CallbackState& st, double latest_train_accuracy,
                              double threshold, const TrainingPolicy& policy) {
  if (latest_train_accuracy < 0.0 || latest_train_accuracy > 1.0)
    throw ContractError("accuracy must be in [0, 1]");
  if (!st.switched && latest_train_accuracy > threshold) {
    st.switched = true;
    st.monitored_metric = Monitor::kValLoss;
    st.best_value = worst_value(Monitor::kValLoss);
    st.epochs_since_improvement = 0;
    if (policy.lr_monitor == LrMonitorMode::kSwitchedMonitor) {
      st.lr_monitored = Monitor::kValLoss;
      st.lr_best_value = worst_value(Monitor::kValLoss);
      st.lr_epochs_since_improvement = 0;
    }
  }
  return st.monitored_metric;
}

/// Record this epoch's monitored value; keep a full weight copy whenever it
/// improves. Returns whether it improved.
inline bool snapshot_best(CallbackState& st, model::ClassifierModel& model,
                          double metric_value, double min_delta, int epoch) {
  if (!std::isfinite(metric_value))
    throw ContractError("monitored metric must be finite");
  if (is_improvement(st.monitored_metric, metric_value, st.best_value, min_delta)) {
    st.best_value = metric_value;
    st.best_weights = model.snapshot_weights();
    st.best_epoch = epoch;
    st.epochs_since_improvement = 0;
    return true;
  }
  st.epochs_since_improvement += 1;
  return false;
}

/// Track the scheduler's metric and halve the learning rate after lr_patience
/// consecutive non-improving epochs. Returns the (possibly reduced) rate.
inline double reduce_lr_on_plateau(CallbackState& st, double lr_metric_value,
                                   double current_lr, const TrainingPolicy& policy) {
  if (current_lr <= 0.0) throw ContractError("learning rate must be > 0");
  if (is_improvement(st.lr_monitored, lr_metric_value, st.lr_best_value,
                     policy.min_delta)) {
    st.lr_best_value = lr_metric_value;
    st.lr_epochs_since_improvement = 0;
    return current_lr;
  }
  st.lr_epochs_since_improvement += 1;
  if (st.lr_epochs_since_improvement >= policy.lr_patience) {
    st.lr_epochs_since_improvement = 0;
    return current_lr * policy.lr_reduction_factor;
  }
  return current_lr;
}

inline bool early_stop_check(const CallbackState& st, const TrainingPolicy& policy) {
  return st.epochs_since_improvement >= policy.early_stop_patience;
}

}  // namespace endoxai::training
