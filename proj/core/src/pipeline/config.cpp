#include "pavesat/pipeline/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "pavesat/error.hpp"
#include "pavesat/random.hpp"

namespace pavesat::pipeline {
namespace {

using json = nlohmann::json;

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParameterError("config: '" + where + "' must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw ParameterError("config: unknown key '" + key + "' in '" + where + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::filesystem::path resolve(const json& j, const char* key, const std::filesystem::path& base,
                              const std::filesystem::path& fallback) {
  if (!j.contains(key)) return fallback;
  std::filesystem::path p = j.at(key).get<std::string>();
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

std::pair<double, double> range(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParameterError("config: ranges are [min, max] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

model::CompactNetConfig default_network() {
  model::CompactNetConfig n;
  n.conv_blocks = {{8, 2, true, true}, {16, 1, true, true}, {32, 1, true, true}};
  n.hidden = {};
  return n;
}

model::CompactNetConfig PipelineConfig::network() const {
  model::CompactNetConfig n = model.network;
  n.input_channels = 3;
  n.input_height = dataset.input_height;
  n.input_width = dataset.input_width;
  n.num_classes = 5;
  return n;
}

void PipelineConfig::validate() const {
  if (geo.half_width_ft <= 0) throw ParameterError("config: geo.half_width_ft must be positive");
  if (geo.units_per_foot <= 0) throw ParameterError("config: geo.units_per_foot must be positive");
  if (geo.densify_step < 0) throw ParameterError("config: geo.densify_step must be >= 0");
  if (dataset.input_height <= 0 || dataset.input_width <= 0) {
    throw ParameterError("config: dataset input size must be positive");
  }
  dataset::SplitConfig{dataset.train_fraction, 0, dataset.stratified}.validate();
  dataset.augmentation.validate();
  network().validate();
  train.validate();
}

PipelineConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  PipelineConfig cfg;
  cfg.model.network = default_network();
  try {
    check_keys(j, "<root>", {"seed", "workdir", "paths", "geo", "dataset", "model", "train", "ensemble", "metrics"});
    read(j, "seed", cfg.seed);
    cfg.workdir = resolve(j, "workdir", base_dir, cfg.workdir);

    if (j.contains("paths")) {
      const auto& p = j["paths"];
      check_keys(p, "paths", {"rasters", "centerlines", "sections", "pmis", "coefficients", "ride_curve"});
      cfg.paths.rasters = resolve(p, "rasters", base_dir, {});
      cfg.paths.centerlines = resolve(p, "centerlines", base_dir, {});
      cfg.paths.sections = resolve(p, "sections", base_dir, {});
      cfg.paths.pmis = resolve(p, "pmis", base_dir, {});
      cfg.paths.coefficients = resolve(p, "coefficients", base_dir, {});
      cfg.paths.ride_curve = resolve(p, "ride_curve", base_dir, {});
    }
    if (j.contains("geo")) {
      const auto& g = j["geo"];
      check_keys(g, "geo", {"half_width_ft", "units_per_foot", "densify_step", "crs", "lonlat_projection"});
      read(g, "half_width_ft", cfg.geo.half_width_ft);
      read(g, "units_per_foot", cfg.geo.units_per_foot);
      read(g, "densify_step", cfg.geo.densify_step);
      read(g, "crs", cfg.geo.crs);
      if (g.contains("lonlat_projection")) {
        const auto& t = g["lonlat_projection"];
        check_keys(t, "geo.lonlat_projection",
                   {"central_meridian", "latitude_of_origin", "scale_factor", "false_easting", "false_northing"});
        geo::TransverseMercator tm;
        read(t, "central_meridian", tm.central_meridian_deg);
        read(t, "latitude_of_origin", tm.latitude_of_origin_deg);
        read(t, "scale_factor", tm.scale_factor);
        read(t, "false_easting", tm.false_easting);
        read(t, "false_northing", tm.false_northing);
        cfg.geo.lonlat_projection = tm;
      }
    }
    if (j.contains("dataset")) {
      const auto& d = j["dataset"];
      check_keys(d, "dataset", {"train_fraction", "stratified", "input_height", "input_width", "augment", "augmentation"});
      read(d, "train_fraction", cfg.dataset.train_fraction);
      read(d, "stratified", cfg.dataset.stratified);
      read(d, "input_height", cfg.dataset.input_height);
      read(d, "input_width", cfg.dataset.input_width);
      read(d, "augment", cfg.dataset.augment);
      if (d.contains("augmentation")) {
        const auto& a = d["augmentation"];
        check_keys(a, "dataset.augmentation",
                   {"rotation_max_deg", "horizontal_flip_prob", "vertical_flip_prob", "zoom_range",
                    "shift_max_fraction", "brightness_range", "resampling"});
        auto& aug = cfg.dataset.augmentation;
        read(a, "rotation_max_deg", aug.rotation_max_deg);
        read(a, "horizontal_flip_prob", aug.horizontal_flip_prob);
        read(a, "vertical_flip_prob", aug.vertical_flip_prob);
        read(a, "shift_max_fraction", aug.shift_max_fraction);
        if (a.contains("zoom_range")) aug.zoom_range = range(a["zoom_range"]);
        if (a.contains("brightness_range")) aug.brightness_range = range(a["brightness_range"]);
        if (a.contains("resampling")) {
          const auto r = a["resampling"].get<std::string>();
          if (r == "bilinear") aug.resampling = dataset::Resampling::Bilinear;
          else if (r == "nearest") aug.resampling = dataset::Resampling::Nearest;
          else throw ParameterError("config: unknown resampling '" + r + "'");
        }
      }
    }
    if (j.contains("model")) {
      const auto& m = j["model"];
      check_keys(m, "model", {"conv_blocks", "hidden", "masked_pooling", "freeze_features", "fine_tune"});
      if (m.contains("conv_blocks")) {
        cfg.model.network.conv_blocks.clear();
        for (const auto& b : m["conv_blocks"]) {
          check_keys(b, "model.conv_blocks[]", {"filters", "stride", "pool"});
          model::ConvBlockSpec spec;
          read(b, "filters", spec.filters);
          read(b, "stride", spec.stride);
          read(b, "pool", spec.pool);
          cfg.model.network.conv_blocks.push_back(spec);
        }
      }
      if (m.contains("hidden")) {
        cfg.model.network.hidden.clear();
        for (const auto& u : m["hidden"]) cfg.model.network.hidden.push_back({u.get<int>(), true});
      }
      read(m, "masked_pooling", cfg.model.network.mask_input);
      read(m, "freeze_features", cfg.model.freeze_features);
      read(m, "fine_tune", cfg.model.fine_tune);
    }
    if (j.contains("train")) {
      const auto& t = j["train"];
      check_keys(t, "train", {"epochs", "batch_size", "learning_rate", "beta1", "beta2", "epsilon", "fine_tune_lr",
                              "validation_fraction"});
      read(t, "epochs", cfg.train.epochs);
      read(t, "batch_size", cfg.train.batch_size);
      read(t, "learning_rate", cfg.train.learning_rate);
      read(t, "beta1", cfg.train.beta1);
      read(t, "beta2", cfg.train.beta2);
      read(t, "epsilon", cfg.train.epsilon);
      read(t, "fine_tune_lr", cfg.train.fine_tune_lr);
      read(t, "validation_fraction", cfg.train.validation_fraction);
    }
    if (j.contains("ensemble")) {
      const auto& e = j["ensemble"];
      check_keys(e, "ensemble", {"mode", "top_k"});
      if (e.contains("mode")) cfg.ensemble.mode = ensemble::parse_combine_mode(e["mode"].get<std::string>());
      read(e, "top_k", cfg.ensemble.top_k);
    }
    if (j.contains("metrics")) {
      const auto& m = j["metrics"];
      check_keys(m, "metrics", {"averaging"});
      if (m.contains("averaging")) cfg.averaging = metrics::parse_averaging(m["averaging"].get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

std::uint64_t stage_seed(const PipelineConfig& cfg, const std::string& stage) {
  return derive_seed(cfg.seed, stage);
}

}  // namespace pavesat::pipeline
