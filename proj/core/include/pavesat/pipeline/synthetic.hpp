#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "pavesat/dataset/image.hpp"
#include "pavesat/pmis/condition.hpp"
#include "pavesat/random.hpp"

namespace pavesat::pipeline {

/// Procedural pavement textures: asphalt-like noise with crack density
/// and pothole count rising with class severity.
struct SyntheticConfig {
  /// Images per class, in class index order (VeryGood .. VeryPoor).
  std::array<int, pmis::kNumClasses> class_counts = {140, 120, 100, 80, 60};
  int size = 64;
  std::uint64_t seed = 0;
  std::string route = "SYN1";
  double section_miles = 0.1;
};

dataset::Image render_texture(pmis::ConditionClass cls, int size, Rng& rng);

struct SyntheticSummary {
  std::size_t images = 0;
  std::filesystem::path centerlines;
  std::filesystem::path sections;
  std::filesystem::path pmis;
};

/// Writes crops/<id>.png + .json and labels.csv into `workdir`, plus
/// centerlines.csv, sections.csv and pmis.csv describing a straight
/// synthetic route whose consecutive sections carry the images.
SyntheticSummary write_synthetic(const std::filesystem::path& workdir, const SyntheticConfig& cfg);

}  // namespace pavesat::pipeline
