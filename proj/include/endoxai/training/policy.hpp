#pragma once

#include "endoxai/core/error.hpp"
#include "endoxai/training/adamax.hpp"

namespace endoxai::training {

// What the learning-rate scheduler watches: the active (possibly switched)
// monitor, or always validation loss.
enum class LrMonitorMode { kSwitchedMonitor, kValLoss };

struct TrainingPolicy {
  int epochs = 15;
  int batch_size = 64;
  double learning_rate = 0.001;
  double lr_reduction_factor = 0.5;
  int lr_patience = 3;
  int early_stop_patience = 5;
  double accuracy_threshold = 0.9;
  double min_delta = 1e-4;  // smallest change that counts as improvement
  int manual_prompt_interval = 1;  // epochs between prompts; 0 disables
  bool shuffle = false;
  LrMonitorMode lr_monitor = LrMonitorMode::kSwitchedMonitor;
  AdamaxConfig adamax;

  void validate() const {
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (learning_rate <= 0.0) throw ConfigError("learning_rate must be > 0");
    if (lr_reduction_factor <= 0.0 || lr_reduction_factor >= 1.0)
      throw ConfigError("lr_reduction_factor must be in (0, 1)");
    if (lr_patience < 1) throw ConfigError("lr_patience must be >= 1");
    if (early_stop_patience < 1) throw ConfigError("early_stop_patience must be >= 1");
    if (accuracy_threshold <= 0.0 || accuracy_threshold >= 1.0)
      throw ConfigError("accuracy_threshold must be in (0, 1)");
    if (min_delta < 0.0) throw ConfigError("min_delta must be >= 0");
    if (manual_prompt_interval < 0)
      throw ConfigError("manual_prompt_interval must be >= 0");
    adamax.validate();
  }
};

}  // namespace endoxai::training
