// Pavement condition pipeline driver.
#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "pavesat/error.hpp"
#include "pavesat/pipeline/commands.hpp"
#include "pavesat/pipeline/config.hpp"
#include "pavesat/pipeline/log.hpp"

namespace fs = std::filesystem;
using namespace pavesat;

int main(int argc, char** argv) {
  CLI::App app{"Pavement condition classification from section imagery"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string workdir;
  bool json_logs = false;
  bool verbose = false;
  app.add_option("--config", config_path, "JSON pipeline config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Global seed (overrides the config)");
  app.add_option("--workdir", workdir, "Working directory (overrides the config)");
  app.add_flag("--json-logs", json_logs, "Emit one JSON object per log line");
  app.add_flag("-v,--verbose", verbose, "Include debug messages");

  auto* extract = app.add_subcommand("extract", "Crop section images from GeoTIFF tiles");
  auto* score = app.add_subcommand("score", "Compute condition scores and classes from PMIS records");
  auto* build = app.add_subcommand("build", "Join crops with labels and write the dataset manifest");

  auto* train = app.add_subcommand("train", "Train one model on the manifest train split");
  std::string model_id;
  std::optional<int> epochs;
  train->add_option("--model-id", model_id, "Model name (directory under models/)")->required();
  train->add_option("--epochs", epochs, "Override the configured epoch count")->check(CLI::PositiveNumber);

  auto* predict = app.add_subcommand("predict", "Write class probabilities for a manifest split");
  std::string split = "test";
  predict->add_option("--model-id", model_id, "Trained model name")->required();
  predict->add_option("--split", split, "Manifest split")->check(CLI::IsMember({"test", "train"}));

  auto* ens = app.add_subcommand("ensemble", "Combine prediction files into ensemble.csv");
  std::vector<std::string> files;
  std::string accuracies, mode;
  std::optional<std::size_t> top_k;
  ens->add_option("files", files, "Prediction CSV files (default: predictions/*.csv)")->check(CLI::ExistingFile);
  ens->add_option("--accuracies", accuracies, "accuracies.json for weighting or top-k selection");
  ens->add_option("--mode", mode, "uniform or accuracy_weighted")
      ->check(CLI::IsMember({"uniform", "accuracy_weighted"}));
  ens->add_option("--top-k", top_k, "Keep the k most accurate models");

  auto* evaluate = app.add_subcommand("evaluate", "Confusion matrix and summary metrics");
  pipeline::EvaluateOptions eval_opts;
  std::string predictions, manifest, output;
  evaluate->add_option("--predictions", predictions, "Ensemble or prediction CSV (default: ensemble.csv)");
  evaluate->add_option("--manifest", manifest, "Dataset manifest (default: manifest.json)");
  evaluate->add_option("--output", output, "Output directory (default: eval/)");

  auto* report = app.add_subcommand("report", "Write a GeoJSON map of section predictions");

  CLI11_PARSE(app, argc, argv);

  pipeline::Logger log(&std::cerr, json_logs, verbose ? pipeline::LogLevel::Debug : pipeline::LogLevel::Info);
  try {
    pipeline::PipelineConfig cfg =
        config_path.empty() ? pipeline::parse_config("{}") : pipeline::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!workdir.empty()) cfg.workdir = workdir;

    if (*extract) {
      const auto s = pipeline::cmd_extract(cfg, log);
      return s.failed > 0 ? 3 : 0;
    }
    if (*score) pipeline::cmd_score(cfg, log);
    if (*build) pipeline::cmd_build(cfg, log);
    if (*train) {
      if (epochs) cfg.train.epochs = *epochs;
      pipeline::cmd_train(cfg, model_id, log);
    }
    if (*predict) pipeline::cmd_predict(cfg, model_id, split, log);
    if (*ens) {
      if (!mode.empty()) cfg.ensemble.mode = ensemble::parse_combine_mode(mode);
      if (top_k) cfg.ensemble.top_k = *top_k;
      std::vector<fs::path> paths(files.begin(), files.end());
      pipeline::cmd_ensemble(cfg, paths, accuracies, log);
    }
    if (*evaluate) {
      eval_opts.predictions = predictions;
      eval_opts.manifest = manifest;
      eval_opts.output_dir = output;
      const auto s = pipeline::cmd_evaluate(cfg, eval_opts, log);
      std::cout << "accuracy " << s.accuracy << "\n"
                << "f1 (" << metrics::to_string(s.averaging) << ") " << s.headline().f1 << "\n";
    }
    if (*report) pipeline::cmd_report(cfg, log);
  } catch (const pavesat::Error& e) {
    log.error(app.get_subcommands().front()->get_name(), e.what());
    return 1;
  } catch (const std::exception& e) {
    log.error(app.get_subcommands().front()->get_name(), std::string("unexpected failure: ") + e.what());
    return 1;
  }
  return 0;
}
