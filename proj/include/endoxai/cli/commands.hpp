#pragma once

#include <array>
#include <exception>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "endoxai/cli/config.hpp"
#include "endoxai/core/error.hpp"
#include "endoxai/core/fsio.hpp"
#include "endoxai/data/corpus.hpp"
#include "endoxai/data/loader.hpp"
#include "endoxai/data/splits.hpp"
#include "endoxai/explain/lime.hpp"
#include "endoxai/explain/overlay.hpp"
#include "endoxai/metrics/compare.hpp"
#include "endoxai/metrics/curves.hpp"
#include "endoxai/metrics/evaluate.hpp"
#include "endoxai/metrics/report.hpp"
#include "endoxai/model/checkpoint.hpp"
#include "endoxai/training/control.hpp"
#include "endoxai/training/trainer.hpp"

namespace endoxai::cli {

struct CommandIO {
  std::ostream* out = &std::cout;
  std::ostream* err = &std::cerr;
};

inline int error_exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  if (dynamic_cast<const EnvironmentError*>(&e)) return 1;  // user-fixable setup
  if (dynamic_cast<const DataError*>(&e)) return 2;
  return 3;
}

/// Shared exception -> exit-code boundary for every subcommand.
template <typename Fn>
int run_guarded(const CommandIO& io, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    int code = error_exit_code(e);
    const char* kind = code == 1 ? "config error" : code == 2 ? "data error" : "error";
    *io.err << kind << ": " << e.what() << "\n";
    return code;
  }
}

namespace paths {

inline std::string manifest(const RunConfig& c) { return c.output_dir + "/manifest.csv"; }
inline std::string rejects(const RunConfig& c) { return c.output_dir + "/rejects.csv"; }
inline std::string checkpoint_bin(const RunConfig& c) {
  return c.output_dir + "/checkpoint.bin";
}
inline std::string checkpoint_json(const RunConfig& c) {
  return c.output_dir + "/checkpoint.json";
}

}  // namespace paths

/// Echo the fully-resolved configuration into the output dir before any work,
/// so each run is self-describing.
inline void write_resolved_config(const RunConfig& config) {
  std::filesystem::create_directories(config.output_dir);
  fsio::atomic_write(config.output_dir + "/config_resolved.txt", render_config(config));
}

inline data::SplitManifest load_manifest(const RunConfig& config) {
  std::string path = paths::manifest(config);
  if (!fsio::exists(path))
    throw DataError("manifest not found at " + path + "; run `prepare` first");
  return data::parse_manifest_csv(fsio::read_file(path));
}

/// Resolve `--checkpoint` into the .bin/.json pair. Accepts the .bin file,
/// the .json sidecar, or a bare stem; empty means the output dir's default.
inline std::pair<std::string, std::string> checkpoint_pair(const RunConfig& config,
                                                           std::string path) {
  if (path.empty()) return {paths::checkpoint_bin(config), paths::checkpoint_json(config)};
  auto strip = [&](const std::string& suffix) {
    if (path.size() > suffix.size() &&
        path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
      path.resize(path.size() - suffix.size());
  };
  strip(".bin");
  strip(".json");
  return {path + ".bin", path + ".json"};
}

inline std::string file_stem(const std::string& path) {
  std::string stem = std::filesystem::path(path).stem().string();
  // checkpoint.bin and checkpoint.json share the stem "checkpoint"
  return stem.empty() ? path : stem;
}

// ---------------------------------------------------------------- prepare --

inline int cmd_prepare(const RunConfig& config, const CommandIO& io = {}) {
  return run_guarded(io, [&] {
    if (config.corpus_root.empty())
      throw ConfigError("data.corpus_root is required for `prepare`");
    write_resolved_config(config);

    data::ScanResult scan = data::scan_corpus(config.corpus_root);
    data::SplitManifest manifest =
        data::make_splits(scan.records, split_ratios(config), config.seed);
    fsio::atomic_write(paths::manifest(config), data::manifest_csv(manifest));
    fsio::atomic_write(paths::rejects(config), data::rejects_csv(scan.rejects));

    std::vector<std::array<std::size_t, 3>> counts(manifest.class_names.size(),
                                                   {0, 0, 0});
    for (const data::ImageRecord& r : manifest.records) {
      std::size_t col = r.split == data::Split::train ? 0
                        : r.split == data::Split::val ? 1
                                                      : 2;
      ++counts[static_cast<std::size_t>(r.label_index)][col];
    }
    *io.out << "scanned " << manifest.records.size() << " images across "
            << manifest.class_names.size() << " classes\n";
    for (std::size_t i = 0; i < manifest.class_names.size(); ++i)
      *io.out << "  " << manifest.class_names[i] << ": train " << counts[i][0]
              << ", val " << counts[i][1] << ", test " << counts[i][2] << "\n";
    *io.out << "train/val/test = " << manifest.split_size(data::Split::train) << "/"
            << manifest.split_size(data::Split::val) << "/"
            << manifest.split_size(data::Split::test) << "\n";
    *io.out << "wrote " << paths::manifest(config) << " and " << paths::rejects(config)
            << "\n";
    for (const std::string& w : manifest.warnings) *io.err << "warning: " << w << "\n";
    if (!scan.rejects.empty())
      *io.err << "warning: " << scan.rejects.size()
              << " unreadable file(s) listed in rejects.csv\n";
    return 0;
  });
}

// ------------------------------------------------------------------ train --

inline nlohmann::json run_metadata_json(const RunConfig& config,
                                        const data::SplitManifest& manifest,
                                        model::ClassifierModel& model,
                                        const training::TrainReport& report) {
  const training::TrainingPolicy& p = config.train;
  nlohmann::json j;
  j["command"] = "train";
  j["seed"] = config.seed;
  j["backbone"] = config.backbone;
  j["trainable_backbone"] = config.trainable_backbone;
  j["parameter_count"] = model.parameter_count();
  j["class_names"] = manifest.class_names;
  j["policy"] = {{"epochs", p.epochs},
                 {"batch_size", p.batch_size},
                 {"learning_rate", p.learning_rate},
                 {"lr_reduction_factor", p.lr_reduction_factor},
                 {"lr_patience", p.lr_patience},
                 {"early_stop_patience", p.early_stop_patience},
                 {"accuracy_threshold", p.accuracy_threshold},
                 {"min_delta", p.min_delta},
                 {"manual_prompt_interval", p.manual_prompt_interval},
                 {"shuffle", p.shuffle},
                 {"lr_monitor", config.lr_monitor},
                 {"adamax",
                  {{"beta1", p.adamax.beta1},
                   {"beta2", p.adamax.beta2},
                   {"epsilon", p.adamax.epsilon}}}};
  j["preprocess"] = {{"flip_enabled", config.flip_enabled},
                     {"flip_probability", config.flip_probability},
                     {"norm_scale", config.norm_scale},
                     {"norm_offset", config.norm_offset}};
  j["monitor_log"] = report.monitor_log;
  j["final_monitor"] = report.final_monitor;
  j["stop_reason"] = report.stop_reason;
  j["aborted"] = report.aborted;
  j["best_epoch"] = report.best_epoch;
  j["best_value"] = report.best_value;
  j["final_learning_rate"] = report.final_learning_rate;
  j["epochs_planned"] = report.epochs_planned;
  j["epochs_run"] = report.history.records.size();
  j["total_duration_s"] = report.total_duration_s;
  return j;
}

inline int cmd_train(const RunConfig& config, const CommandIO& io = {},
                     training::ControlChannel* control = nullptr) {
  return run_guarded(io, [&] {
    write_resolved_config(config);
    data::SplitManifest manifest = load_manifest(config);
    int num_classes = static_cast<int>(manifest.class_names.size());

    model::ClassifierModel model =
        model::build_classifier(config.backbone, head_config(config, num_classes),
                                config.trainable_backbone, config.seed);

    training::TrainOptions opts;
    opts.policy = training_policy(config);
    opts.preprocess = preprocess_config(config);
    opts.seed = config.seed;
    opts.log = io.out;
    opts.prompt_timeout_seconds = config.prompt_timeout_s;
    training::StdinControlChannel stdin_channel;
    if (control)
      opts.control = control;
    else if (config.interactive)
      opts.control = &stdin_channel;

    training::TrainReport report = training::train(model, manifest, opts);

    model::CheckpointMeta meta;
    meta.backbone_id = config.backbone;
    meta.head = head_config(config, num_classes);
    meta.trainable_backbone = config.trainable_backbone;
    meta.seed = config.seed;
    meta.class_names = manifest.class_names;
    meta.norm_scale = config.norm_scale;
    meta.norm_offset = config.norm_offset;
    model::save_checkpoint(model, meta, paths::checkpoint_bin(config),
                           paths::checkpoint_json(config));
    fsio::atomic_write(config.output_dir + "/history.csv",
                       training::history_csv(report.history));
    fsio::atomic_write(config.output_dir + "/run_metadata.json",
                       run_metadata_json(config, manifest, model, report).dump(2) + "\n");
    if (!report.history.records.empty())
      metrics::render_curves(report.history, config.output_dir);

    *io.out << "stop_reason=" << report.stop_reason << " best_epoch=" << report.best_epoch
            << " best_" << report.final_monitor << "=" << report.best_value << "\n";
    *io.out << "artifacts written to " << config.output_dir << "\n";
    if (report.aborted) {
      *io.err << "error: training aborted on non-finite loss/gradients; "
                 "best checkpoint preserved\n";
      return 3;
    }
    return 0;
  });
}

// --------------------------------------------------------------- evaluate --

inline metrics::EvaluateOptions evaluate_options(const RunConfig& config,
                                                 const model::CheckpointMeta& meta) {
  metrics::EvaluateOptions opts;
  opts.split = data::Split::test;
  opts.batch_size = config.eval_batch_size;
  opts.averaging = averaging_mode(config);
  opts.preprocess = preprocess_config(config);
  // the checkpoint knows what normalization it was trained with
  opts.preprocess.norm_scale = meta.norm_scale;
  opts.preprocess.norm_offset = meta.norm_offset;
  opts.seed = config.seed;
  return opts;
}

inline int cmd_evaluate(const RunConfig& config, const std::string& checkpoint = "",
                        const CommandIO& io = {}) {
  return run_guarded(io, [&] {
    write_resolved_config(config);
    data::SplitManifest manifest = load_manifest(config);
    auto [bin, json] = checkpoint_pair(config, checkpoint);
    model::LoadedCheckpoint loaded = model::load_checkpoint(bin, json);
    if (loaded.meta.class_names != manifest.class_names)
      throw DataError("checkpoint class names do not match the manifest");

    metrics::EvaluationResult result =
        metrics::evaluate(loaded.model, manifest, evaluate_options(config, loaded.meta));

    fsio::atomic_write(config.output_dir + "/metrics.json",
                       metrics::metrics_json(result).dump(2) + "\n");
    std::string text = metrics::metrics_text(result);
    fsio::atomic_write(config.output_dir + "/metrics.txt", text);
    metrics::write_png(metrics::render_confusion(result.cm),
                       config.output_dir + "/confusion_matrix.png");
    fsio::atomic_write(config.output_dir + "/confusion_matrix.json",
                       metrics::confusion_sidecar(result.cm).dump(2) + "\n");
    *io.out << text;
    return 0;
  });
}

// ---------------------------------------------------------------- compare --

inline int cmd_compare(const RunConfig& config, const std::vector<std::string>& checkpoints,
                       const CommandIO& io = {}) {
  return run_guarded(io, [&] {
    if (checkpoints.empty())
      throw ConfigError("compare needs at least one checkpoint path");
    write_resolved_config(config);
    data::SplitManifest manifest = load_manifest(config);

    std::vector<metrics::ComparisonRow> rows;
    std::vector<std::string> failures;
    int failure_code = 0;
    for (const std::string& ckpt : checkpoints) {
      std::string name = file_stem(ckpt);
      try {
        auto [bin, json] = checkpoint_pair(config, ckpt);
        model::LoadedCheckpoint loaded = model::load_checkpoint(bin, json);
        if (loaded.meta.class_names != manifest.class_names)
          throw DataError("checkpoint class names do not match the manifest");
        metrics::EvaluationResult result = metrics::evaluate(
            loaded.model, manifest, evaluate_options(config, loaded.meta));
        rows.push_back(metrics::comparison_row(name, result.report));
      } catch (const std::exception& e) {
        failures.push_back(name + ": " + e.what());
        if (failure_code == 0) failure_code = error_exit_code(e);
      }
    }

    std::string text;
    if (!rows.empty()) {
      fsio::atomic_write(config.output_dir + "/comparison.csv", metrics::compare_csv(rows));
      text = metrics::compare_text(rows);
    }
    if (!failures.empty()) {
      text += text.empty() ? "" : "\n";
      for (const std::string& f : failures) text += "failed: " + f + "\n";
    }
    fsio::atomic_write(config.output_dir + "/comparison.txt", text);
    *io.out << text;
    for (const std::string& f : failures) *io.err << "error: " << f << "\n";
    return failure_code;
  });
}

// ---------------------------------------------------------------- explain --

inline int cmd_explain(const RunConfig& config, const std::vector<std::string>& images,
                       const std::string& checkpoint = "", const CommandIO& io = {}) {
  return run_guarded(io, [&] {
    if (images.empty()) throw ConfigError("explain needs at least one image path");
    write_resolved_config(config);
    auto [bin, json] = checkpoint_pair(config, checkpoint);
    model::LoadedCheckpoint loaded = model::load_checkpoint(bin, json);

    data::PreprocessConfig prep;
    prep.flip_enabled = false;
    prep.norm_scale = loaded.meta.norm_scale;
    prep.norm_offset = loaded.meta.norm_offset;
    explain::LimeConfig lime = lime_config(config);
    explain::BatchPredictor predictor =
        explain::classifier_predictor(loaded.model, prep);

    std::set<std::string> used_stems;
    std::vector<std::string> failures;
    int failure_code = 0;
    for (const std::string& path : images) {
      try {
        data::RawImage image = data::load_image(path);
        explain::SegmentMap segments = explain::segment_image(image, lime.segmentation);
        explain::Explanation ex =
            explain::explain_instance(predictor, image, lime, &segments);
        std::string stem = file_stem(path);
        for (int suffix = 2; !used_stems.insert(stem).second; ++suffix)
          stem = file_stem(path) + "_" + std::to_string(suffix);
        std::string cls =
            ex.predicted_class >= 0 &&
                    ex.predicted_class < static_cast<int>(loaded.meta.class_names.size())
                ? loaded.meta.class_names[static_cast<std::size_t>(ex.predicted_class)]
                : std::to_string(ex.predicted_class);
        explain::ExplanationPaths out = explain::write_explanation_artifacts(
            config.output_dir, stem, image, segments, ex, lime, path, cls);
        *io.out << path << " -> " << cls << " (" << ex.selected_segments.size()
                << " of " << ex.segment_count << " segments; fidelity "
                << ex.local_fidelity << ")\n";
        *io.out << "  wrote " << out.raw_png << ", " << out.lime_png << ", "
                << out.sidecar_json << "\n";
        for (const std::string& w : ex.warnings) *io.err << "warning: " << w << "\n";
      } catch (const std::exception& e) {
        failures.push_back(path + ": " + e.what());
        if (failure_code == 0) failure_code = error_exit_code(e);
      }
    }
    for (const std::string& f : failures) *io.err << "error: " << f << "\n";
    return failure_code;
  });
}

}  // namespace endoxai::cli
