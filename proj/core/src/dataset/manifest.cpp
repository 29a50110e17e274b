#include "pavesat/dataset/manifest.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "pavesat/csv.hpp"
#include "pavesat/error.hpp"
#include "pavesat/random.hpp"

namespace pavesat::dataset {
namespace {

using ojson = nlohmann::ordered_json;

ojson counts_json(const ClassCounts& c) {
  ojson j = ojson::object();
  for (auto cls : pmis::kAllClasses) j[std::string(pmis::class_name(cls))] = c[pmis::class_index(cls)];
  return j;
}

ClassCounts counts_from_json(const nlohmann::json& j) {
  ClassCounts c{};
  for (auto cls : pmis::kAllClasses) {
    c[pmis::class_index(cls)] = j.value(std::string(pmis::class_name(cls)), std::size_t{0});
  }
  return c;
}

ojson samples_json(std::span<const LabeledSample> samples) {
  ojson arr = ojson::array();
  for (const auto& s : samples) {
    arr.push_back({{"sample_id", s.sample_id},
                   {"image", s.image_ref},
                   {"label", std::string(pmis::class_name(s.label))}});
  }
  return arr;
}

std::vector<LabeledSample> samples_from_json(const nlohmann::json& arr) {
  std::vector<LabeledSample> out;
  for (const auto& s : arr) {
    out.push_back({s.at("sample_id").get<std::string>(), s.at("image").get<std::string>(),
                   pmis::class_from_name(s.at("label").get<std::string>())});
  }
  return out;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

}  // namespace

void DatasetManifest::validate() const {
  std::set<std::string> test_ids;
  for (const auto& s : test) test_ids.insert(s.sample_id);
  for (const auto& s : train) {
    if (test_ids.count(s.sample_id)) {
      throw ParameterError("manifest sample '" + s.sample_id + "' is in both train and test");
    }
  }
  std::size_t target = 0;
  for (auto c : train_counts_after) target = std::max(target, c);
  for (auto c : train_counts_after) {
    if (c != 0 && c != target) throw ParameterError("manifest train classes are not balanced");
  }
}

const LabeledSample* DatasetManifest::find(const std::string& sample_id) const {
  for (const auto* list : {&test, &train}) {
    for (const auto& s : *list) {
      if (s.sample_id == sample_id) return &s;
    }
  }
  return nullptr;
}

DatasetManifest build_manifest(std::span<const LabeledSample> samples, const SplitConfig& split_cfg,
                               std::uint64_t oversample_seed) {
  DatasetManifest m;
  m.split_config = split_cfg;
  m.oversample_seed = oversample_seed;
  auto parts = split(samples, split_cfg);
  m.train_counts_before = count_classes(parts.train);
  m.train = oversample(parts.train, oversample_seed);
  m.train_counts_after = count_classes(m.train);
  m.test = std::move(parts.test);
  m.test_counts = count_classes(m.test);

  std::ostringstream cfg;
  cfg << "train_fraction=" << csv::format_number(split_cfg.train_fraction)
      << ";stratified=" << split_cfg.stratified << ";split_seed=" << split_cfg.seed
      << ";oversample_seed=" << oversample_seed << ";n=" << samples.size();
  for (const auto& s : samples) cfg << ';' << s.sample_id << ':' << pmis::class_index(s.label);
  m.config_hash = hex64(fnv1a(cfg.str()));
  m.validate();
  return m;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
  ojson j;
  j["format"] = "pavesat-manifest";
  j["version"] = 1;
  j["class_names"] = pmis::class_names();
  j["seeds"] = {{"split", m.split_config.seed}, {"oversample", m.oversample_seed}};
  j["split"] = {{"train_fraction", m.split_config.train_fraction},
                {"stratified", m.split_config.stratified}};
  j["config_hash"] = m.config_hash;
  j["counts"] = {{"train_before_oversampling", counts_json(m.train_counts_before)},
                 {"train_after_oversampling", counts_json(m.train_counts_after)},
                 {"test", counts_json(m.test_counts)}};
  j["train"] = samples_json(m.train);
  j["test"] = samples_json(m.test);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open manifest " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    DatasetManifest m;
    m.split_config.seed = j.at("seeds").at("split").get<std::uint64_t>();
    m.oversample_seed = j.at("seeds").at("oversample").get<std::uint64_t>();
    m.split_config.train_fraction = j.at("split").at("train_fraction").get<double>();
    m.split_config.stratified = j.at("split").at("stratified").get<bool>();
    m.config_hash = j.value("config_hash", "");
    m.train_counts_before = counts_from_json(j.at("counts").at("train_before_oversampling"));
    m.train_counts_after = counts_from_json(j.at("counts").at("train_after_oversampling"));
    m.test_counts = counts_from_json(j.at("counts").at("test"));
    m.train = samples_from_json(j.at("train"));
    m.test = samples_from_json(j.at("test"));
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const DomainError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_rejects(const std::filesystem::path& path, std::span<const Reject> rejects) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  csv::write_row(out, {"route_name", "offset_from", "offset_to", "reason"});
  for (const auto& r : rejects) {
    csv::write_row(out, {r.key.route_name, csv::format_number(r.key.offset_from()),
                         csv::format_number(r.key.offset_to()), r.reason});
  }
}

}  // namespace pavesat::dataset
