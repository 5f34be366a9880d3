#include <string>
#include <vector>

#include <CLI/CLI.hpp>

#include "endoxai/cli/commands.hpp"
#include "endoxai/cli/config.hpp"

namespace {

// Precedence: built-in defaults < --config file < --set overrides < dedicated
// flags. CLI11 gives us the raw strings; RunConfig owns typed parsing.
struct CliArgs {
  std::string config_file;
  std::vector<std::string> sets;
  std::string output_dir;
  std::string corpus_root;
  std::string checkpoint;
  std::vector<std::string> checkpoints;
  std::vector<std::string> images;
  std::string seed;
  bool interactive = false;
  bool no_interactive = false;
};

void add_globals(CLI::App& app, CliArgs& args) {
  app.add_option("--config", args.config_file, "key=value config file");
  app.add_option("--set", args.sets, "override one key, e.g. --set train.epochs=20")
      ->take_all();
  app.add_option("--output", args.output_dir, "artifact directory");
  app.add_option("--seed", args.seed, "global deterministic seed");
  app.add_flag("--interactive", args.interactive, "enable the training control prompt");
  app.add_flag("--no-interactive", args.no_interactive, "disable the control prompt");
}

endoxai::cli::RunConfig resolve(const CliArgs& args) {
  endoxai::cli::RunConfig config;
  if (!args.config_file.empty())
    endoxai::cli::apply_config_file(config, args.config_file);
  for (const std::string& s : args.sets) {
    auto [key, value] = endoxai::cli::parse_setting(s);
    endoxai::cli::apply_kv(config, key, value);
  }
  if (!args.output_dir.empty()) config.output_dir = args.output_dir;
  if (!args.corpus_root.empty()) config.corpus_root = args.corpus_root;
  if (!args.seed.empty())
    endoxai::cli::apply_kv(config, "seed", args.seed);
  if (args.interactive) config.interactive = true;
  if (args.no_interactive) config.interactive = false;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explainable endoscopic image classification toolkit"};
  app.require_subcommand(1);
  CliArgs args;
  add_globals(app, args);

  CLI::App* prepare = app.add_subcommand("prepare", "scan a corpus and write the split manifest");
  prepare->add_option("corpus", args.corpus_root, "root dir with one subdir per class");
  add_globals(*prepare, args);

  CLI::App* train = app.add_subcommand("train", "train the classifier on the prepared splits");
  add_globals(*train, args);

  CLI::App* evaluate = app.add_subcommand("evaluate", "score a checkpoint on the test split");
  evaluate->add_option("--checkpoint", args.checkpoint, "checkpoint stem or .bin path");
  add_globals(*evaluate, args);

  CLI::App* compare = app.add_subcommand("compare", "tabulate metrics for several checkpoints");
  compare->add_option("checkpoints", args.checkpoints, "checkpoint stems or .bin paths")
      ->required();
  add_globals(*compare, args);

  CLI::App* explain = app.add_subcommand("explain", "render saliency overlays for images");
  explain->add_option("images", args.images, "image files to explain")->required();
  explain->add_option("--checkpoint", args.checkpoint, "checkpoint stem or .bin path");
  add_globals(*explain, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage problems are config errors
  }

  endoxai::cli::CommandIO io;
  endoxai::cli::RunConfig config;
  try {
    config = resolve(args);
  } catch (const std::exception& e) {
    *io.err << "config error: " << e.what() << "\n";
    return 1;
  }

  if (prepare->parsed()) return endoxai::cli::cmd_prepare(config, io);
  if (train->parsed()) return endoxai::cli::cmd_train(config, io);
  if (evaluate->parsed()) return endoxai::cli::cmd_evaluate(config, args.checkpoint, io);
  if (compare->parsed()) return endoxai::cli::cmd_compare(config, args.checkpoints, io);
  if (explain->parsed())
    return endoxai::cli::cmd_explain(config, args.images, args.checkpoint, io);
  return 1;
}
