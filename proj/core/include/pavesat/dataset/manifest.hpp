#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pavesat/dataset/samples.hpp"

namespace pavesat::dataset {

/// Deterministic record of the split and oversampling.
struct DatasetManifest {
  std::vector<LabeledSample> train;  // after oversampling
  std::vector<LabeledSample> test;   // never oversampled
  ClassCounts train_counts_before{};
  ClassCounts train_counts_after{};
  ClassCounts test_counts{};
  SplitConfig split_config;
  std::uint64_t oversample_seed = 0;
  std::string config_hash;

  /// Checks train/test disjointness and equal oversampled class counts.
  void validate() const;
  const LabeledSample* find(const std::string& sample_id) const;
};

DatasetManifest build_manifest(std::span<const LabeledSample> samples, const SplitConfig& split_cfg,
                               std::uint64_t oversample_seed);

/// Image paths are stored as given; pass them relative to the manifest
/// location to keep manifests identical across working directories.
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path);

void write_rejects(const std::filesystem::path& path, std::span<const Reject> rejects);

}  // namespace pavesat::dataset
