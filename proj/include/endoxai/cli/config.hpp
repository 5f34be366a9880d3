#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "endoxai/core/error.hpp"
#include "endoxai/core/fsio.hpp"
#include "endoxai/data/preprocess.hpp"
#include "endoxai/data/splits.hpp"
#include "endoxai/explain/lime.hpp"
#include "endoxai/metrics/classification.hpp"
#include "endoxai/model/classifier.hpp"
#include "endoxai/training/policy.hpp"

namespace endoxai::cli {

// Every default is the published configuration; anything can be overridden
// by config file or flags, and the resolved result is echoed before work
// starts.
struct RunConfig {
  std::uint64_t seed = 42;
  std::string output_dir = "out";
  bool interactive = false;

  std::string corpus_root;
  double train_ratio = 0.8, val_ratio = 0.1, test_ratio = 0.1;
  bool flip_enabled = true;
  double flip_probability = 0.5;
  double norm_scale = 1.0, norm_offset = 0.0;

  std::string backbone = "efficientnet_b3";
  bool trainable_backbone = false;
  model::HeadConfig head;  // num_classes is resolved from the manifest

  training::TrainingPolicy train;
  std::string lr_monitor = "switched";  // or "val_loss"
  double prompt_timeout_s = 30.0;

  int eval_batch_size = 64;
  std::string averaging = "weighted";  // or "macro"

  explain::LimeConfig lime;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

inline long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected integer, got '" + value + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(value, &used);
    if (used != value.size() || value.find('-') != std::string::npos)
      throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected nonnegative integer, got '" + value + "'");
  }
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected number, got '" + value + "'");
  }
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string fmt(bool v) { return v ? "true" : "false"; }

}  // namespace detail

struct ConfigKey {
  std::string name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

inline const std::vector<ConfigKey>& config_keys() {
  using detail::fmt;
  auto b = [](const char* name, auto member_get, auto member_set) {
    return ConfigKey{name, member_get, member_set};
  };
  static const std::vector<ConfigKey> keys = {
      b("seed", [](const RunConfig& c) { return std::to_string(c.seed); },
        [](RunConfig& c, const std::string& v) { c.seed = detail::parse_u64("seed", v); }),
      b("output_dir", [](const RunConfig& c) { return c.output_dir; },
        [](RunConfig& c, const std::string& v) { c.output_dir = v; }),
      b("interactive", [](const RunConfig& c) { return fmt(c.interactive); },
        [](RunConfig& c, const std::string& v) {
          c.interactive = detail::parse_bool("interactive", v);
        }),
      b("data.corpus_root", [](const RunConfig& c) { return c.corpus_root; },
        [](RunConfig& c, const std::string& v) { c.corpus_root = v; }),
      b("data.train_ratio", [](const RunConfig& c) { return fmt(c.train_ratio); },
        [](RunConfig& c, const std::string& v) {
          c.train_ratio = detail::parse_double("data.train_ratio", v);
        }),
      b("data.val_ratio", [](const RunConfig& c) { return fmt(c.val_ratio); },
        [](RunConfig& c, const std::string& v) {
          c.val_ratio = detail::parse_double("data.val_ratio", v);
        }),
      b("data.test_ratio", [](const RunConfig& c) { return fmt(c.test_ratio); },
        [](RunConfig& c, const std::string& v) {
          c.test_ratio = detail::parse_double("data.test_ratio", v);
        }),
      b("data.flip_enabled", [](const RunConfig& c) { return fmt(c.flip_enabled); },
        [](RunConfig& c, const std::string& v) {
          c.flip_enabled = detail::parse_bool("data.flip_enabled", v);
        }),
      b("data.flip_probability",
        [](const RunConfig& c) { return fmt(c.flip_probability); },
        [](RunConfig& c, const std::string& v) {
          c.flip_probability = detail::parse_double("data.flip_probability", v);
        }),
      b("data.norm_scale", [](const RunConfig& c) { return fmt(c.norm_scale); },
        [](RunConfig& c, const std::string& v) {
          c.norm_scale = detail::parse_double("data.norm_scale", v);
        }),
      b("data.norm_offset", [](const RunConfig& c) { return fmt(c.norm_offset); },
        [](RunConfig& c, const std::string& v) {
          c.norm_offset = detail::parse_double("data.norm_offset", v);
        }),
      b("model.backbone", [](const RunConfig& c) { return c.backbone; },
        [](RunConfig& c, const std::string& v) { c.backbone = v; }),
      b("model.trainable_backbone",
        [](const RunConfig& c) { return fmt(c.trainable_backbone); },
        [](RunConfig& c, const std::string& v) {
          c.trainable_backbone = detail::parse_bool("model.trainable_backbone", v);
        }),
      b("head.dense_units",
        [](const RunConfig& c) { return std::to_string(c.head.dense_units); },
        [](RunConfig& c, const std::string& v) {
          c.head.dense_units = static_cast<int>(detail::parse_int("head.dense_units", v));
        }),
      b("head.dropout_rate", [](const RunConfig& c) { return fmt(c.head.dropout_rate); },
        [](RunConfig& c, const std::string& v) {
          c.head.dropout_rate = detail::parse_double("head.dropout_rate", v);
        }),
      b("head.l2_kernel", [](const RunConfig& c) { return fmt(c.head.l2_kernel); },
        [](RunConfig& c, const std::string& v) {
          c.head.l2_kernel = detail::parse_double("head.l2_kernel", v);
        }),
      b("head.l1_activity", [](const RunConfig& c) { return fmt(c.head.l1_activity); },
        [](RunConfig& c, const std::string& v) {
          c.head.l1_activity = detail::parse_double("head.l1_activity", v);
        }),
      b("head.l1_bias", [](const RunConfig& c) { return fmt(c.head.l1_bias); },
        [](RunConfig& c, const std::string& v) {
          c.head.l1_bias = detail::parse_double("head.l1_bias", v);
        }),
      b("head.bn_momentum", [](const RunConfig& c) { return fmt(c.head.bn_momentum); },
        [](RunConfig& c, const std::string& v) {
          c.head.bn_momentum = detail::parse_double("head.bn_momentum", v);
        }),
      b("head.bn_epsilon", [](const RunConfig& c) { return fmt(c.head.bn_epsilon); },
        [](RunConfig& c, const std::string& v) {
          c.head.bn_epsilon = detail::parse_double("head.bn_epsilon", v);
        }),
      b("train.epochs", [](const RunConfig& c) { return std::to_string(c.train.epochs); },
        [](RunConfig& c, const std::string& v) {
          c.train.epochs = static_cast<int>(detail::parse_int("train.epochs", v));
        }),
      b("train.batch_size",
        [](const RunConfig& c) { return std::to_string(c.train.batch_size); },
        [](RunConfig& c, const std::string& v) {
          c.train.batch_size = static_cast<int>(detail::parse_int("train.batch_size", v));
        }),
      b("train.learning_rate",
        [](const RunConfig& c) { return fmt(c.train.learning_rate); },
        [](RunConfig& c, const std::string& v) {
          c.train.learning_rate = detail::parse_double("train.learning_rate", v);
        }),
      b("train.lr_reduction_factor",
        [](const RunConfig& c) { return fmt(c.train.lr_reduction_factor); },
        [](RunConfig& c, const std::string& v) {
          c.train.lr_reduction_factor =
              detail::parse_double("train.lr_reduction_factor", v);
        }),
      b("train.lr_patience",
        [](const RunConfig& c) { return std::to_string(c.train.lr_patience); },
        [](RunConfig& c, const std::string& v) {
          c.train.lr_patience = static_cast<int>(detail::parse_int("train.lr_patience", v));
        }),
      b("train.early_stop_patience",
        [](const RunConfig& c) { return std::to_string(c.train.early_stop_patience); },
        [](RunConfig& c, const std::string& v) {
          c.train.early_stop_patience =
              static_cast<int>(detail::parse_int("train.early_stop_patience", v));
        }),
      b("train.accuracy_threshold",
        [](const RunConfig& c) { return fmt(c.train.accuracy_threshold); },
        [](RunConfig& c, const std::string& v) {
          c.train.accuracy_threshold =
              detail::parse_double("train.accuracy_threshold", v);
        }),
      b("train.min_delta", [](const RunConfig& c) { return fmt(c.train.min_delta); },
        [](RunConfig& c, const std::string& v) {
          c.train.min_delta = detail::parse_double("train.min_delta", v);
        }),
      b("train.manual_prompt_interval",
        [](const RunConfig& c) { return std::to_string(c.train.manual_prompt_interval); },
        [](RunConfig& c, const std::string& v) {
          c.train.manual_prompt_interval =
              static_cast<int>(detail::parse_int("train.manual_prompt_interval", v));
        }),
      b("train.shuffle", [](const RunConfig& c) { return fmt(c.train.shuffle); },
        [](RunConfig& c, const std::string& v) {
          c.train.shuffle = detail::parse_bool("train.shuffle", v);
        }),
      b("train.lr_monitor", [](const RunConfig& c) { return c.lr_monitor; },
        [](RunConfig& c, const std::string& v) {
          if (v != "switched" && v != "val_loss")
            throw ConfigError("train.lr_monitor: expected 'switched' or 'val_loss'");
          c.lr_monitor = v;
        }),
      b("train.adamax_beta1",
        [](const RunConfig& c) { return fmt(c.train.adamax.beta1); },
        [](RunConfig& c, const std::string& v) {
          c.train.adamax.beta1 = detail::parse_double("train.adamax_beta1", v);
        }),
      b("train.adamax_beta2",
        [](const RunConfig& c) { return fmt(c.train.adamax.beta2); },
        [](RunConfig& c, const std::string& v) {
          c.train.adamax.beta2 = detail::parse_double("train.adamax_beta2", v);
        }),
      b("train.adamax_epsilon",
        [](const RunConfig& c) { return fmt(c.train.adamax.epsilon); },
        [](RunConfig& c, const std::string& v) {
          c.train.adamax.epsilon = detail::parse_double("train.adamax_epsilon", v);
        }),
      b("train.prompt_timeout_s",
        [](const RunConfig& c) { return fmt(c.prompt_timeout_s); },
        [](RunConfig& c, const std::string& v) {
          c.prompt_timeout_s = detail::parse_double("train.prompt_timeout_s", v);
        }),
      b("eval.batch_size",
        [](const RunConfig& c) { return std::to_string(c.eval_batch_size); },
        [](RunConfig& c, const std::string& v) {
          c.eval_batch_size = static_cast<int>(detail::parse_int("eval.batch_size", v));
        }),
      b("eval.averaging", [](const RunConfig& c) { return c.averaging; },
        [](RunConfig& c, const std::string& v) {
          if (v != "weighted" && v != "macro")
            throw ConfigError("eval.averaging: expected 'weighted' or 'macro'");
          c.averaging = v;
        }),
      b("lime.num_samples",
        [](const RunConfig& c) { return std::to_string(c.lime.num_samples); },
        [](RunConfig& c, const std::string& v) {
          c.lime.num_samples = static_cast<int>(detail::parse_int("lime.num_samples", v));
        }),
      b("lime.num_features",
        [](const RunConfig& c) { return std::to_string(c.lime.num_features); },
        [](RunConfig& c, const std::string& v) {
          c.lime.num_features = static_cast<int>(detail::parse_int("lime.num_features", v));
        }),
      b("lime.positive_only",
        [](const RunConfig& c) { return fmt(c.lime.positive_only); },
        [](RunConfig& c, const std::string& v) {
          c.lime.positive_only = detail::parse_bool("lime.positive_only", v);
        }),
      b("lime.hide_color", [](const RunConfig& c) { return fmt(c.lime.hide_color); },
        [](RunConfig& c, const std::string& v) {
          c.lime.hide_color = detail::parse_double("lime.hide_color", v);
        }),
      b("lime.min_weight", [](const RunConfig& c) { return fmt(c.lime.min_weight); },
        [](RunConfig& c, const std::string& v) {
          c.lime.min_weight = detail::parse_double("lime.min_weight", v);
        }),
      b("lime.kernel_width", [](const RunConfig& c) { return fmt(c.lime.kernel_width); },
        [](RunConfig& c, const std::string& v) {
          c.lime.kernel_width = detail::parse_double("lime.kernel_width", v);
        }),
      b("lime.ridge_lambda", [](const RunConfig& c) { return fmt(c.lime.ridge_lambda); },
        [](RunConfig& c, const std::string& v) {
          c.lime.ridge_lambda = detail::parse_double("lime.ridge_lambda", v);
        }),
      b("lime.predict_batch_size",
        [](const RunConfig& c) { return std::to_string(c.lime.predict_batch_size); },
        [](RunConfig& c, const std::string& v) {
          c.lime.predict_batch_size =
              static_cast<int>(detail::parse_int("lime.predict_batch_size", v));
        }),
      b("lime.segment_kernel_size",
        [](const RunConfig& c) { return fmt(c.lime.segmentation.kernel_size); },
        [](RunConfig& c, const std::string& v) {
          c.lime.segmentation.kernel_size =
              detail::parse_double("lime.segment_kernel_size", v);
        }),
      b("lime.segment_max_dist",
        [](const RunConfig& c) { return fmt(c.lime.segmentation.max_dist); },
        [](RunConfig& c, const std::string& v) {
          c.lime.segmentation.max_dist = detail::parse_double("lime.segment_max_dist", v);
        }),
      b("lime.segment_ratio",
        [](const RunConfig& c) { return fmt(c.lime.segmentation.ratio); },
        [](RunConfig& c, const std::string& v) {
          c.lime.segmentation.ratio = detail::parse_double("lime.segment_ratio", v);
        }),
  };
  return keys;
}

inline void apply_kv(RunConfig& config, const std::string& key, const std::string& value) {
  for (const ConfigKey& k : config_keys())
    if (k.name == key) {
      k.set(config, value);
      return;
    }
  throw ConfigError("unknown config key: " + key);
}

/// Split one `key=value` setting; used by both config files and --set flags.
inline std::pair<std::string, std::string> parse_setting(const std::string& text) {
  std::size_t eq = text.find('=');
  if (eq == std::string::npos)
    throw ConfigError("expected key=value, got '" + text + "'");
  std::string key = detail::trim(text.substr(0, eq));
  std::string value = detail::trim(text.substr(eq + 1));
  if (key.empty()) throw ConfigError("empty key in '" + text + "'");
  return {key, value};
}

/// Flat key=value lines; '#' starts a comment, blank lines are skipped.
inline void apply_config_text(RunConfig& config, const std::string& text,
                              const std::string& source) {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    try {
      auto [key, value] = parse_setting(line);
      apply_kv(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (pos > text.size()) break;
  }
}

inline void apply_config_file(RunConfig& config, const std::string& path) {
  if (!fsio::exists(path)) throw ConfigError("config file not found: " + path);
  apply_config_text(config, fsio::read_file(path), path);
}

/// The resolved-config echo: one key=value per line, in key-table order.
inline std::string render_config(const RunConfig& config) {
  std::string out;
  for (const ConfigKey& k : config_keys()) out += k.name + "=" + k.get(config) + "\n";
  return out;
}

inline data::SplitRatios split_ratios(const RunConfig& c) {
  return {c.train_ratio, c.val_ratio, c.test_ratio};
}

inline data::PreprocessConfig preprocess_config(const RunConfig& c) {
  data::PreprocessConfig p;
  p.flip_enabled = c.flip_enabled;
  p.flip_probability = c.flip_probability;
  p.norm_scale = c.norm_scale;
  p.norm_offset = c.norm_offset;
  return p;
}

inline model::HeadConfig head_config(const RunConfig& c, int num_classes) {
  model::HeadConfig head = c.head;
  head.num_classes = num_classes;
  head.validate();
  return head;
}

inline training::TrainingPolicy training_policy(const RunConfig& c) {
  training::TrainingPolicy policy = c.train;
  policy.lr_monitor = c.lr_monitor == "val_loss" ? training::LrMonitorMode::kValLoss
                                                 : training::LrMonitorMode::kSwitchedMonitor;
  policy.validate();
  return policy;
}

inline metrics::Averaging averaging_mode(const RunConfig& c) {
  return c.averaging == "macro" ? metrics::Averaging::kMacro
                                : metrics::Averaging::kWeighted;
}

inline explain::LimeConfig lime_config(const RunConfig& c) {
  explain::LimeConfig lime = c.lime;
  lime.seed = c.seed;
  lime.validate();
  return lime;
}

}  // namespace endoxai::cli
