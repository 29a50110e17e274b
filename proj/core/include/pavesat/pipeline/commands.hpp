#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pavesat/dataset/manifest.hpp"
#include "pavesat/ensemble/ensemble.hpp"
#include "pavesat/metrics/metrics.hpp"
#include "pavesat/model/train.hpp"
#include "pavesat/pipeline/config.hpp"
#include "pavesat/pipeline/log.hpp"

namespace pavesat::pipeline {

/// File layout under the working directory.
struct Workdir {
  std::filesystem::path root;

  std::filesystem::path crops() const { return root / "crops"; }
  std::filesystem::path coverage_report() const { return root / "coverage_report.csv"; }
  std::filesystem::path labels() const { return root / "labels.csv"; }
  std::filesystem::path manifest() const { return root / "manifest.json"; }
  std::filesystem::path rejects() const { return root / "rejects.csv"; }
  std::filesystem::path model_dir(const std::string& id) const { return root / "models" / id; }
  std::filesystem::path weights(const std::string& id) const { return model_dir(id) / "weights.bin"; }
  std::filesystem::path history(const std::string& id) const { return model_dir(id) / "history.csv"; }
  std::filesystem::path predictions_dir() const { return root / "predictions"; }
  std::filesystem::path predictions(const std::string& id) const { return predictions_dir() / (id + ".csv"); }
  std::filesystem::path accuracies() const { return predictions_dir() / "accuracies.json"; }
  std::filesystem::path ensemble() const { return root / "ensemble.csv"; }
  std::filesystem::path eval_dir() const { return root / "eval"; }
  std::filesystem::path report() const { return root / "report.geojson"; }
};

struct ExtractSummary {
  std::size_t sections = 0;
  std::size_t written = 0;
  std::size_t failed = 0;
};

/// Crops every section from the raster tiles into crops/<id>.png + .json and
/// writes coverage_report.csv. Sections that fail are reported, not fatal.
ExtractSummary cmd_extract(const PipelineConfig& cfg, Logger& log);

/// Writes labels.csv from the PMIS file; returns the row count.
std::size_t cmd_score(const PipelineConfig& cfg, Logger& log);

/// Joins crops with labels, splits and oversamples; writes manifest.json
/// and rejects.csv.
dataset::DatasetManifest cmd_build(const PipelineConfig& cfg, Logger& log);

/// Trains one model on the manifest train split into models/<id>/.
model::TrainingHistory cmd_train(const PipelineConfig& cfg, const std::string& model_id, Logger& log);

/// Writes predictions/<id>.csv for the manifest split ("test" or "train")
/// and records the model's accuracy on it in predictions/accuracies.json.
ensemble::ModelPrediction cmd_predict(const PipelineConfig& cfg, const std::string& model_id,
                                      const std::string& split, Logger& log);

/// Combines prediction files (default: every predictions/*.csv) into
/// ensemble.csv. `accuracies` defaults to predictions/accuracies.json.
ensemble::EnsemblePrediction cmd_ensemble(const PipelineConfig& cfg,
                                          const std::vector<std::filesystem::path>& prediction_files,
                                          const std::filesystem::path& accuracies, Logger& log);

struct EvaluateOptions {
  std::filesystem::path predictions;  // ensemble or prediction CSV; default ensemble.csv
  std::filesystem::path manifest;     // default manifest.json
  std::filesystem::path output_dir;   // default eval/
};

/// Writes confusion.csv, summary.json and learning_curves.csv.
metrics::MetricsSummary cmd_evaluate(const PipelineConfig& cfg, const EvaluateOptions& options, Logger& log);

/// Writes report.geojson with one feature per section; returns the feature count.
std::size_t cmd_report(const PipelineConfig& cfg, Logger& log);

/// Loads a manifest image and converts it to a network input, augmenting
/// when `augment_seed` is set.
std::vector<float> load_input(const std::filesystem::path& image_path, const PipelineConfig& cfg,
                              const std::optional<std::uint64_t>& augment_seed);

}  // namespace pavesat::pipeline
