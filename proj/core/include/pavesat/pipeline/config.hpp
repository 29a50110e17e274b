#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "pavesat/dataset/augment.hpp"
#include "pavesat/dataset/samples.hpp"
#include "pavesat/ensemble/ensemble.hpp"
#include "pavesat/geo/projection.hpp"
#include "pavesat/metrics/metrics.hpp"
#include "pavesat/model/network.hpp"
#include "pavesat/model/train.hpp"

namespace pavesat::pipeline {

struct PathsConfig {
  std::filesystem::path rasters;      // directory of GeoTIFF tiles
  std::filesystem::path centerlines;  // route_id,milepoint,x,y
  std::filesystem::path sections;     // route_name,offset_from,offset_to
  std::filesystem::path pmis;         // PMIS records
  std::filesystem::path coefficients; // optional distress utility table
  std::filesystem::path ride_curve;   // optional ride utility knots
};

struct GeoConfig {
  double half_width_ft = 12.0;
  double units_per_foot = 1.0;
  double densify_step = 0.0;
  std::string crs;  // expected raster CRS; empty accepts the tiles' CRS
  /// Set when centerline x/y are longitude/latitude.
  std::optional<geo::TransverseMercator> lonlat_projection;
};

struct DatasetConfig {
  double train_fraction = 0.8;
  bool stratified = true;
  int input_height = 224;
  int input_width = 224;
  bool augment = true;
  dataset::AugmentationConfig augmentation;
};

struct ModelConfig {
  model::CompactNetConfig network;  // input size and classes come from DatasetConfig
  bool freeze_features = false;
  bool fine_tune = false;
};

struct EnsembleSettings {
  ensemble::CombineMode mode = ensemble::CombineMode::Uniform;
  std::size_t top_k = 0;  // 0 keeps every model
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  std::filesystem::path workdir = "work";
  PathsConfig paths;
  GeoConfig geo;
  DatasetConfig dataset;
  ModelConfig model;
  model::TrainConfig train;
  EnsembleSettings ensemble;
  metrics::Averaging averaging = metrics::Averaging::Weighted;

  /// Network config with the input shape filled from the dataset settings.
  model::CompactNetConfig network() const;
  void validate() const;
};

/// Compact default network: three conv blocks (the first strided) + GAP + dense.
model::CompactNetConfig default_network();

/// Parses the JSON config. Relative paths resolve against `base_dir`.
PipelineConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Stage seed derived from the global seed, e.g. stage_seed(cfg, "split").
std::uint64_t stage_seed(const PipelineConfig& cfg, const std::string& stage);

}  // namespace pavesat::pipeline
