#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pavesat/pmis/condition.hpp"
#include "pavesat/pmis/io.hpp"
#include "pavesat/section_key.hpp"

namespace pavesat::dataset {

struct LabeledSample {
  std::string sample_id;
  std::string image_ref;  // path to the section PNG
  pmis::ConditionClass label = pmis::ConditionClass::VeryPoor;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

/// A cropped section image on disk, identified by its PMIS key.
struct SectionImageRef {
  SectionKey key;
  std::string image_ref;
};

struct Reject {
  SectionKey key;
  std::string reason;  // "image without PMIS record" or "PMIS record without image"
};

struct JoinResult {
  std::vector<LabeledSample> samples;  // in image order
  std::vector<Reject> rejects;
};

/// Matches images to PMIS labels on (route_name, offset_from, offset_to).
/// Unmatched keys land in `rejects`. Throws AmbiguityError naming the key
/// when an image or label key appears more than once.
JoinResult join_labels(std::span<const SectionImageRef> images,
                       std::span<const pmis::LabelRow> records);

using ClassCounts = std::array<std::size_t, pmis::kNumClasses>;
ClassCounts count_classes(std::span<const LabeledSample> samples);

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool stratified = true;

  void validate() const;
};

struct SplitResult {
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> test;
  std::vector<std::string> warnings;
};

/// Seeded train/test partition. |train| = round(fraction * n). Stratified
/// mode apportions that total across classes by largest remainder, so
/// each class keeps its proportion within one sample. Both lists keep
/// the input order.
SplitResult split(std::span<const LabeledSample> samples, const SplitConfig& cfg);

/// Duplicates randomly chosen samples of each minority class until every
/// present class matches the largest class count. Inputs keep their order;
/// duplicates are appended class by class.
std::vector<LabeledSample> oversample(std::span<const LabeledSample> train, std::uint64_t seed);

}  // namespace pavesat::dataset
