#include "pavesat/dataset/samples.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "pavesat/error.hpp"
#include "pavesat/random.hpp"

namespace pavesat::dataset {

JoinResult join_labels(std::span<const SectionImageRef> images,
                       std::span<const pmis::LabelRow> records) {
  std::map<SectionKey, const pmis::LabelRow*> by_key;
  for (const auto& r : records) {
    if (!by_key.emplace(r.key, &r).second) {
      throw AmbiguityError("duplicate PMIS rows for section " + r.key.describe());
    }
  }
  std::map<SectionKey, bool> seen_images;
  JoinResult out;
  for (const auto& img : images) {
    if (seen_images.count(img.key)) {
      throw AmbiguityError("duplicate images for section " + img.key.describe());
    }
    seen_images[img.key] = true;
    const auto it = by_key.find(img.key);
    if (it == by_key.end()) {
      out.rejects.push_back({img.key, "image without PMIS record"});
      continue;
    }
    out.samples.push_back({img.key.id(), img.image_ref, it->second->condition_class});
  }
  for (const auto& [key, row] : by_key) {
    if (!seen_images.count(key)) out.rejects.push_back({key, "PMIS record without image"});
  }
  return out;
}

ClassCounts count_classes(std::span<const LabeledSample> samples) {
  ClassCounts counts{};
  for (const auto& s : samples) ++counts[pmis::class_index(s.label)];
  return counts;
}

void SplitConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ParameterError("train_fraction must lie in (0, 1), got " + std::to_string(train_fraction));
  }
}

SplitResult split(std::span<const LabeledSample> samples, const SplitConfig& cfg) {
  cfg.validate();
  const std::size_t n = samples.size();
  if (n < 2) throw ParameterError("need at least 2 samples to split, got " + std::to_string(n));
  const auto n_train = static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(n)));

  Rng rng(cfg.seed);
  std::vector<std::uint8_t> in_train(n, 0);
  SplitResult out;

  if (!cfg.stratified) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order.begin(), order.end());
    for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = 1;
  } else {
    std::array<std::vector<std::size_t>, pmis::kNumClasses> members;
    for (std::size_t i = 0; i < n; ++i) members[pmis::class_index(samples[i].label)].push_back(i);

    // Largest-remainder apportionment of n_train across classes.
    std::array<std::size_t, pmis::kNumClasses> quota{};
    std::array<double, pmis::kNumClasses> remainder{};
    std::size_t assigned = 0;
    for (int c = 0; c < pmis::kNumClasses; ++c) {
      if (members[c].empty()) {
        out.warnings.push_back("class " + std::string(pmis::class_name(pmis::class_from_index(c))) +
                               " has no samples; skipped in stratified split");
        continue;
      }
      const double exact = static_cast<double>(n_train) * static_cast<double>(members[c].size()) /
                           static_cast<double>(n);
      quota[c] = static_cast<std::size_t>(std::floor(exact));
      remainder[c] = exact - std::floor(exact);
      assigned += quota[c];
    }
    std::array<int, pmis::kNumClasses> by_remainder{0, 1, 2, 3, 4};
    std::stable_sort(by_remainder.begin(), by_remainder.end(),
                     [&](int a, int b) { return remainder[a] > remainder[b]; });
    for (int c : by_remainder) {
      if (assigned >= n_train) break;
      if (!members[c].empty() && quota[c] < members[c].size()) {
        ++quota[c];
        ++assigned;
      }
    }
    for (int c = 0; c < pmis::kNumClasses; ++c) {
      auto& m = members[c];
      rng.shuffle(m.begin(), m.end());
      for (std::size_t i = 0; i < quota[c]; ++i) in_train[m[i]] = 1;
    }
  }

  for (std::size_t i = 0; i < n; ++i) (in_train[i] ? out.train : out.test).push_back(samples[i]);
  return out;
}

std::vector<LabeledSample> oversample(std::span<const LabeledSample> train, std::uint64_t seed) {
  std::vector<LabeledSample> out(train.begin(), train.end());
  if (train.empty()) return out;
  std::array<std::vector<std::size_t>, pmis::kNumClasses> members;
  for (std::size_t i = 0; i < train.size(); ++i) members[pmis::class_index(train[i].label)].push_back(i);
  std::size_t target = 0;
  for (const auto& m : members) target = std::max(target, m.size());

  Rng rng(seed);
  for (const auto& m : members) {
    if (m.empty()) continue;
    for (std::size_t k = m.size(); k < target; ++k) out.push_back(train[m[rng.below(m.size())]]);
  }
  return out;
}

}  // namespace pavesat::dataset
