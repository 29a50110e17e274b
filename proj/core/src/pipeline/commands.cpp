#include "pavesat/pipeline/commands.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <nlohmann/json.hpp>
#include <unordered_map>

#include "pavesat/csv.hpp"
#include "pavesat/dataset/augment.hpp"
#include "pavesat/dataset/image.hpp"
#include "pavesat/ensemble/interchange.hpp"
#include "pavesat/error.hpp"
#include "pavesat/geo/geotiff.hpp"
#include "pavesat/geo/io.hpp"
#include "pavesat/geo/raster.hpp"
#include "pavesat/metrics/io.hpp"
#include "pavesat/model/serialize.hpp"
#include "pavesat/pmis/io.hpp"
#include "pavesat/random.hpp"

namespace fs = std::filesystem;

namespace pavesat::pipeline {
namespace {

void require(const fs::path& p, const std::string& what) {
  if (p.empty()) throw ParameterError(what + " path is not configured");
  if (!fs::exists(p)) throw Error(what + " not found: " + p.string());
}

std::vector<fs::path> list_files(const fs::path& dir, std::initializer_list<const char*> extensions) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const char* want : extensions) {
      if (ext == want) out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string num(double v) { return csv::format_number(v); }

geo::BufferOptions buffer_options(const PipelineConfig& cfg, const std::string& crs) {
  geo::BufferOptions b;
  b.half_width_ft = cfg.geo.half_width_ft;
  b.units_per_foot = cfg.geo.units_per_foot;
  b.densify_step = cfg.geo.densify_step;
  b.crs_id = crs;
  return b;
}

std::uint64_t train_seed(const PipelineConfig& cfg, const std::string& model_id) {
  return stage_seed(cfg, "train:" + model_id);
}

void check_model_id(const std::string& id) {
  if (id.empty()) throw ParameterError("model id must not be empty");
  for (char c : id) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      throw ParameterError("model id '" + id + "' may only contain letters, digits, '_', '-' and '.'");
    }
  }
}

/// Network input: image planes, then the mask plane when the network takes one.
std::vector<float> to_vector(dataset::NormalizedImage&& n, bool with_mask) {
  std::vector<float> v = std::move(n.values);
  if (with_mask) v.insert(v.end(), n.mask.begin(), n.mask.end());
  return v;
}

/// Decoded images and un-augmented inputs, keyed by manifest image path.
class InputCache {
 public:
  InputCache(const PipelineConfig& cfg, fs::path base) : cfg_(cfg), base_(std::move(base)) {}

  const dataset::Image& image(const std::string& ref) {
    auto it = images_.find(ref);
    if (it == images_.end()) it = images_.emplace(ref, dataset::read_image_png(base_ / ref)).first;
    return it->second;
  }

  const std::vector<float>& plain(const std::string& ref) {
    auto it = plain_.find(ref);
    if (it == plain_.end()) {
      it = plain_.emplace(ref, to_vector(dataset::normalize(image(ref), cfg_.dataset.input_height,
                                                            cfg_.dataset.input_width),
                                        cfg_.model.network.mask_input)).first;
    }
    return it->second;
  }

  std::vector<float> augmented(const std::string& ref, std::uint64_t seed) {
    Rng rng(seed);
    return to_vector(dataset::normalize(dataset::augment(image(ref), cfg_.dataset.augmentation, rng),
                                        cfg_.dataset.input_height, cfg_.dataset.input_width),
                     cfg_.model.network.mask_input);
  }

 private:
  const PipelineConfig& cfg_;
  fs::path base_;
  std::unordered_map<std::string, dataset::Image> images_;
  std::unordered_map<std::string, std::vector<float>> plain_;
};

void copy_into(const std::vector<float>& src, std::span<float> out) {
  if (src.size() != out.size()) throw ShapeError("input size mismatch");
  std::copy(src.begin(), src.end(), out.begin());
}

std::map<std::string, double> read_accuracies_if_present(const fs::path& path) {
  if (path.empty() || !fs::exists(path)) return {};
  return ensemble::read_accuracies(path);
}

bool has_column(const fs::path& path, const std::string& name) {
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  std::istringstream s(header);
  std::string field;
  while (std::getline(s, field, ',')) {
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.pop_back();
    if (field == name) return true;
  }
  return false;
}

}  // namespace

std::vector<float> load_input(const fs::path& image_path, const PipelineConfig& cfg,
                              const std::optional<std::uint64_t>& augment_seed) {
  const dataset::Image img = dataset::read_image_png(image_path);
  if (augment_seed) {
    Rng rng(*augment_seed);
    return to_vector(dataset::normalize(dataset::augment(img, cfg.dataset.augmentation, rng), cfg.dataset.input_height,
                                        cfg.dataset.input_width),
                     cfg.model.network.mask_input);
  }
  return to_vector(dataset::normalize(img, cfg.dataset.input_height, cfg.dataset.input_width),
                   cfg.model.network.mask_input);
}

ExtractSummary cmd_extract(const PipelineConfig& cfg, Logger& log) {
  require(cfg.paths.rasters, "raster directory");
  require(cfg.paths.centerlines, "centerline file");
  require(cfg.paths.sections, "section file");
  const Workdir wd{cfg.workdir};
  fs::create_directories(wd.crops());

  std::vector<geo::GeoRaster> tiles;
  for (const auto& p : list_files(cfg.paths.rasters, {".tif", ".tiff"})) {
    tiles.push_back(geo::read_geotiff(p));
    tiles.back().id = p.filename().string();
  }
  if (tiles.empty()) throw Error("no GeoTIFF tiles in " + cfg.paths.rasters.string());
  const std::string crs = cfg.geo.crs.empty() ? tiles.front().crs_id : cfg.geo.crs;
  for (const auto& t : tiles) {
    if (t.crs_id != crs) {
      throw CrsError("tile '" + t.id + "' has CRS '" + t.crs_id + "', expected '" + crs + "'");
    }
  }
  log.info("extract", "loaded tiles", {{"tiles", std::to_string(tiles.size())}, {"crs", crs}});

  const auto lines = geo::read_centerlines(cfg.paths.centerlines, cfg.geo.lonlat_projection);
  const auto sections = geo::read_sections(cfg.paths.sections);

  ExtractSummary summary;
  std::ofstream report(wd.coverage_report(), std::ios::trunc);
  if (!report) throw Error("cannot write " + wd.coverage_report().string());
  report << "sample_id,route_name,offset_from,offset_to,status,reason\n";

  for (const auto& spec : sections) {
    ++summary.sections;
    const SectionKey key = SectionKey::from_miles(spec.route_name, spec.offset_from, spec.offset_to);
    const std::string id = key.id();
    try {
      auto line = lines.find(spec.route_name);
      if (line == lines.end()) throw RangeError("no centerline for route '" + spec.route_name + "'");
      const auto poly = geo::section_polygon(line->second, spec, buffer_options(cfg, crs));
      const auto box = geo::bounding_box(poly.ring);
      std::vector<geo::GeoRaster> hits;
      for (const auto& t : tiles) {
        if (t.extent().intersects(box)) hits.push_back(t);
      }
      if (hits.empty()) throw CoverageError("no tile intersects " + key.describe());
      const geo::SectionImage crop =
          hits.size() == 1 ? geo::crop_section(hits.front(), poly) : geo::crop_section(geo::mosaic_lookup(hits, poly), poly);
      geo::write_section_crop(wd.crops() / (id + ".png"), crop);
      geo::write_sidecar(wd.crops() / (id + ".json"),
                         {spec.route_name, key.offset_from(), key.offset_to(), crop.bounds, crop.crs_id});
      ++summary.written;
      csv::write_row(report, {id, spec.route_name, num(key.offset_from()), num(key.offset_to()), "ok", ""});
    } catch (const Error& e) {
      ++summary.failed;
      log.warn("extract", "section failed", {{"section", key.describe()}, {"reason", e.what()}});
      csv::write_row(report, {id, spec.route_name, num(key.offset_from()), num(key.offset_to()), "failed", e.what()});
    }
  }
  log.info("extract", "done", {{"sections", std::to_string(summary.sections)},
                               {"written", std::to_string(summary.written)},
                               {"failed", std::to_string(summary.failed)}});
  return summary;
}

std::size_t cmd_score(const PipelineConfig& cfg, Logger& log) {
  require(cfg.paths.pmis, "PMIS file");
  const Workdir wd{cfg.workdir};
  fs::create_directories(wd.root);
  std::optional<pmis::CoefficientTable> table;
  if (!cfg.paths.coefficients.empty()) table = pmis::read_coefficients(cfg.paths.coefficients);
  const pmis::RideUtilityCurve curve =
      cfg.paths.ride_curve.empty() ? pmis::RideUtilityCurve() : pmis::read_ride_curve(cfg.paths.ride_curve);

  std::vector<pmis::LabelRow> rows;
  std::size_t recomputed = 0;
  for (const auto& rec : pmis::read_pmis_records(cfg.paths.pmis)) {
    try {
      const auto cs = pmis::resolve_condition_score(rec, table ? &*table : nullptr, curve);
      if (!rec.condition_score) ++recomputed;
      rows.push_back({rec.key, cs.value(), pmis::classify(cs)});
    } catch (const Error& e) {
      throw Error(rec.key.describe() + ": " + e.what());
    }
  }
  pmis::write_labels(wd.labels(), rows);
  log.info("score", "wrote labels", {{"rows", std::to_string(rows.size())}, {"recomputed", std::to_string(recomputed)}});
  return rows.size();
}

dataset::DatasetManifest cmd_build(const PipelineConfig& cfg, Logger& log) {
  const Workdir wd{cfg.workdir};
  std::vector<dataset::SectionImageRef> images;
  for (const auto& side : list_files(wd.crops(), {".json"})) {
    const auto s = geo::read_sidecar(side);
    const fs::path png = side.parent_path() / (side.stem().string() + ".png");
    if (!fs::exists(png)) throw Error("sidecar without image: " + side.string());
    images.push_back({SectionKey::from_miles(s.route_name, s.offset_from, s.offset_to),
                      (fs::path("crops") / png.filename()).generic_string()});
  }
  if (images.empty()) throw Error("no section crops in " + wd.crops().string());

  fs::path label_path = wd.labels();
  if (!fs::exists(label_path)) {
    require(cfg.paths.pmis, "labels file");
    label_path = cfg.paths.pmis;
  }
  const auto labels = pmis::read_labels(label_path);
  const auto joined = dataset::join_labels(images, labels);
  dataset::write_rejects(wd.rejects(), joined.rejects);
  if (!joined.rejects.empty()) {
    log.warn("build", "unmatched keys", {{"count", std::to_string(joined.rejects.size())},
                                         {"report", wd.rejects().string()}});
  }
  if (joined.samples.empty()) throw Error("no crops matched a PMIS record");

  const dataset::SplitConfig split{cfg.dataset.train_fraction, stage_seed(cfg, "split"), cfg.dataset.stratified};
  auto manifest = dataset::build_manifest(joined.samples, split, stage_seed(cfg, "oversample"));
  dataset::write_manifest(wd.manifest(), manifest);
  log.info("build", "wrote manifest", {{"samples", std::to_string(joined.samples.size())},
                                       {"train", std::to_string(manifest.train.size())},
                                       {"test", std::to_string(manifest.test.size())}});
  return manifest;
}

model::TrainingHistory cmd_train(const PipelineConfig& cfg, const std::string& model_id, Logger& log) {
  check_model_id(model_id);
  const Workdir wd{cfg.workdir};
  const auto manifest = dataset::read_manifest(wd.manifest());
  if (manifest.train.empty()) throw Error("manifest has an empty train split");
  manifest.validate();

  const std::uint64_t seed = train_seed(cfg, model_id);
  const std::uint64_t aug_seed = derive_seed(seed, "augment");
  InputCache cache(cfg, wd.root);

  model::TrainingData data;
  for (const auto& s : manifest.train) {
    data.ids.push_back(s.sample_id);
    data.labels.push_back(pmis::class_index(s.label));
  }
  data.input = [&](std::size_t index, std::optional<int> epoch, std::span<float> out) {
    const auto& s = manifest.train[index];
    if (epoch && cfg.dataset.augment) {
      // Oversampled copies of one image get distinct draws.
      const auto stream = derive_seed(dataset::augment_stream_seed(aug_seed, s.sample_id, *epoch), "copy",
                                      static_cast<std::int64_t>(index));
      copy_into(cache.augmented(s.image_ref, stream), out);
    } else {
      copy_into(cache.plain(s.image_ref), out);
    }
  };

  model::Network<float> net(cfg.network(), derive_seed(seed, "init"));
  if (cfg.model.freeze_features) net.freeze_features();
  model::TrainConfig tc = cfg.train;
  tc.seed = seed;

  auto on_epoch = [&](const model::EpochRecord& e) {
    log.info("train", "epoch", {{"model", model_id}, {"epoch", std::to_string(e.epoch)},
                                {"train_loss", num(e.train_loss)}, {"val_loss", num(e.val_loss)},
                                {"train_acc", num(e.train_acc)}, {"val_acc", num(e.val_acc)}});
  };
  log.info("train", "start", {{"model", model_id}, {"samples", std::to_string(data.ids.size())},
                              {"parameters", std::to_string(net.parameter_count())}});
  model::TrainingHistory history = model::train(net, data, tc, on_epoch);
  if (cfg.model.fine_tune) {
    tc.seed = derive_seed(seed, "fine_tune");
    auto tuned = model::fine_tune(net, data, tc, [&](const model::EpochRecord& e) {
      model::EpochRecord shifted = e;
      shifted.epoch += static_cast<int>(history.epochs.size());
      on_epoch(shifted);
    });
    const int offset = static_cast<int>(history.epochs.size());
    for (auto e : tuned.epochs) {
      e.epoch += offset;
      history.epochs.push_back(e);
    }
  }
  fs::create_directories(wd.model_dir(model_id));
  model::save_network(net, wd.weights(model_id));
  model::write_history(history, wd.history(model_id));
  log.info("train", "saved", {{"model", model_id}, {"weights", wd.weights(model_id).string()}});
  return history;
}

ensemble::ModelPrediction cmd_predict(const PipelineConfig& cfg, const std::string& model_id, const std::string& split,
                                      Logger& log) {
  check_model_id(model_id);
  if (split != "test" && split != "train") throw ParameterError("split must be 'test' or 'train', got '" + split + "'");
  const Workdir wd{cfg.workdir};
  const auto manifest = dataset::read_manifest(wd.manifest());
  const auto net = model::load_network(wd.weights(model_id));
  if (net.config().input_height != cfg.dataset.input_height || net.config().input_width != cfg.dataset.input_width) {
    throw ShapeError("model '" + model_id + "' expects " + std::to_string(net.config().input_height) + "x" +
                     std::to_string(net.config().input_width) + " inputs but the config uses " +
                     std::to_string(cfg.dataset.input_height) + "x" + std::to_string(cfg.dataset.input_width));
  }
  if (net.config().mask_input != cfg.model.network.mask_input) {
    throw ShapeError("model '" + model_id + "' was trained with masked_pooling=" +
                     (net.config().mask_input ? "true" : "false") + " but the config disagrees");
  }

  // Unique samples in manifest order; the train split may hold oversampled copies.
  std::vector<const dataset::LabeledSample*> samples;
  std::set<std::string> seen;
  for (const auto& s : split == "test" ? manifest.test : manifest.train) {
    if (seen.insert(s.sample_id).second) samples.push_back(&s);
  }
  std::vector<std::string> ids;
  for (const auto* s : samples) ids.push_back(s->sample_id);

  InputCache cache(cfg, wd.root);
  const auto pred = model::predict(net, model_id, ids, [&](std::size_t i, std::optional<int>, std::span<float> out) {
    copy_into(cache.plain(samples[i]->image_ref), out);
  });
  pred.validate();

  std::size_t correct = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    correct += ensemble::argmax(pred.rows[i]) == pmis::class_index(samples[i]->label) ? 1 : 0;
  }
  fs::create_directories(wd.predictions_dir());
  ensemble::write_predictions({pred}, wd.predictions(model_id));
  if (!samples.empty()) {
    auto acc = read_accuracies_if_present(wd.accuracies());
    acc[model_id] = static_cast<double>(correct) / static_cast<double>(samples.size());
    ensemble::write_accuracies(acc, wd.accuracies());
  }
  log.info("predict", "wrote predictions",
           {{"model", model_id}, {"split", split}, {"samples", std::to_string(ids.size())},
            {"accuracy", samples.empty() ? "nan" : num(static_cast<double>(correct) / static_cast<double>(samples.size()))}});
  return pred;
}

ensemble::EnsemblePrediction cmd_ensemble(const PipelineConfig& cfg, const std::vector<fs::path>& prediction_files,
                                          const fs::path& accuracies, Logger& log) {
  const Workdir wd{cfg.workdir};
  std::vector<fs::path> files = prediction_files;
  if (files.empty()) files = list_files(wd.predictions_dir(), {".csv"});
  if (files.empty()) throw ParameterError("no prediction files to combine");

  std::vector<ensemble::ModelPrediction> preds;
  std::set<std::string> ids;
  for (const auto& f : files) {
    for (auto& p : ensemble::read_predictions(f)) {
      if (!ids.insert(p.model_id).second) throw AmbiguityError("model '" + p.model_id + "' appears in several files");
      preds.push_back(std::move(p));
    }
  }

  const bool need_acc = cfg.ensemble.mode == ensemble::CombineMode::AccuracyWeighted ||
                        (cfg.ensemble.top_k > 0 && cfg.ensemble.top_k < preds.size());
  std::map<std::string, double> acc;
  if (need_acc) {
    const fs::path acc_path = accuracies.empty() ? wd.accuracies() : accuracies;
    require(acc_path, "accuracies file");
    acc = ensemble::read_accuracies(acc_path);
    for (const auto& p : preds) {
      if (!acc.count(p.model_id)) throw ParameterError("no accuracy recorded for model '" + p.model_id + "'");
    }
  }
  if (cfg.ensemble.top_k > 0 && cfg.ensemble.top_k < preds.size()) {
    std::vector<ensemble::ModelReport> reports;
    for (const auto& p : preds) reports.push_back({p.model_id, acc.at(p.model_id)});
    const auto keep = ensemble::top_k_select(reports, cfg.ensemble.top_k);
    std::vector<ensemble::ModelPrediction> selected;
    for (const auto& id : keep) {
      for (auto& p : preds) {
        if (p.model_id == id) selected.push_back(p);
      }
    }
    preds = std::move(selected);
  }

  ensemble::EnsembleConfig ec;
  ec.mode = cfg.ensemble.mode;
  if (ec.mode == ensemble::CombineMode::AccuracyWeighted) {
    for (const auto& p : preds) ec.accuracies.push_back(acc.at(p.model_id));
  }
  const auto result = ensemble::combine(preds, ec);
  fs::create_directories(wd.root);
  ensemble::write_ensemble(result, wd.ensemble());
  std::string members;
  for (const auto& p : preds) members += (members.empty() ? "" : ";") + p.model_id;
  log.info("ensemble", "combined", {{"models", members}, {"mode", ensemble::to_string(ec.mode)},
                                    {"samples", std::to_string(result.sample_ids.size())}});
  return result;
}

metrics::MetricsSummary cmd_evaluate(const PipelineConfig& cfg, const EvaluateOptions& options, Logger& log) {
  const Workdir wd{cfg.workdir};
  const fs::path pred_path = options.predictions.empty() ? wd.ensemble() : options.predictions;
  const fs::path manifest_path = options.manifest.empty() ? wd.manifest() : options.manifest;
  const fs::path out_dir = options.output_dir.empty() ? wd.eval_dir() : options.output_dir;
  require(pred_path, "predictions file");
  require(manifest_path, "manifest");

  std::vector<std::string> sample_ids;
  std::vector<int> predicted;
  if (has_column(pred_path, "model_id")) {
    auto preds = ensemble::read_predictions(pred_path);
    ensemble::EnsembleConfig ec;
    if (preds.size() > 1 && cfg.ensemble.mode == ensemble::CombineMode::AccuracyWeighted) {
      const auto acc = read_accuracies_if_present(pred_path.parent_path() / "accuracies.json");
      for (const auto& p : preds) {
        auto it = acc.find(p.model_id);
        if (it == acc.end()) throw ParameterError("no accuracy recorded for model '" + p.model_id + "'");
        ec.accuracies.push_back(it->second);
      }
      ec.mode = ensemble::CombineMode::AccuracyWeighted;
    }
    const auto combined = ensemble::combine(preds, ec);
    sample_ids = combined.sample_ids;
    predicted = combined.predicted;
  } else {
    const auto ens = ensemble::read_ensemble(pred_path);
    sample_ids = ens.sample_ids;
    predicted = ens.predicted;
  }

  const auto manifest = dataset::read_manifest(manifest_path);
  std::unordered_map<std::string, int> truth;
  for (const auto* list : {&manifest.train, &manifest.test}) {
    for (const auto& s : *list) truth[s.sample_id] = pmis::class_index(s.label);
  }
  std::vector<int> labels;
  for (const auto& id : sample_ids) {
    auto it = truth.find(id);
    if (it == truth.end()) throw AlignmentError("sample '" + id + "' is not in the manifest");
    labels.push_back(it->second);
  }

  const auto m = metrics::confusion(labels, predicted, pmis::class_names());
  const auto summary = metrics::summarize(m, cfg.averaging);
  fs::create_directories(out_dir);
  metrics::write_confusion(m, out_dir / "confusion.csv");
  metrics::write_summary(summary, out_dir / "summary.json");

  std::ofstream curves(out_dir / "learning_curves.csv", std::ios::trunc);
  curves << "model_id,epoch,train_loss,val_loss,train_acc,val_acc\n";
  std::vector<fs::path> model_dirs;
  if (fs::is_directory(wd.root / "models")) {
    for (const auto& e : fs::directory_iterator(wd.root / "models")) {
      if (e.is_directory() && fs::exists(e.path() / "history.csv")) model_dirs.push_back(e.path());
    }
  }
  std::sort(model_dirs.begin(), model_dirs.end());
  for (const auto& dir : model_dirs) {
    for (const auto& e : model::read_history(dir / "history.csv").epochs) {
      csv::write_row(curves, {dir.filename().string(), std::to_string(e.epoch), num(e.train_loss), num(e.val_loss),
                              num(e.train_acc), num(e.val_acc)});
    }
  }

  log.info("evaluate", "metrics", {{"accuracy", num(summary.accuracy)},
                                   {"f1", num(summary.headline().f1)},
                                   {"averaging", metrics::to_string(summary.averaging)},
                                   {"samples", std::to_string(summary.total)}});
  return summary;
}

std::size_t cmd_report(const PipelineConfig& cfg, Logger& log) {
  require(cfg.paths.centerlines, "centerline file");
  require(cfg.paths.sections, "section file");
  const Workdir wd{cfg.workdir};
  const auto lines = geo::read_centerlines(cfg.paths.centerlines, cfg.geo.lonlat_projection);
  const auto sections = geo::read_sections(cfg.paths.sections);

  std::map<SectionKey, pmis::LabelRow> labels;
  if (fs::exists(wd.labels())) {
    for (const auto& row : pmis::read_labels(wd.labels())) labels.emplace(row.key, row);
  }
  std::unordered_map<std::string, std::pair<std::string, int>> truth;  // id -> (split, class)
  if (fs::exists(wd.manifest())) {
    const auto manifest = dataset::read_manifest(wd.manifest());
    for (const auto& s : manifest.train) truth[s.sample_id] = {"train", pmis::class_index(s.label)};
    for (const auto& s : manifest.test) truth[s.sample_id] = {"test", pmis::class_index(s.label)};
  }
  std::unordered_map<std::string, std::size_t> pred_index;
  ensemble::EnsemblePrediction ens;
  if (fs::exists(wd.ensemble())) {
    ens = ensemble::read_ensemble(wd.ensemble());
    for (std::size_t i = 0; i < ens.sample_ids.size(); ++i) pred_index[ens.sample_ids[i]] = i;
  }

  using ojson = nlohmann::ordered_json;
  ojson fc;
  fc["type"] = "FeatureCollection";
  if (!cfg.geo.crs.empty()) fc["crs"] = {{"type", "name"}, {"properties", {{"name", cfg.geo.crs}}}};
  ojson features = ojson::array();
  for (const auto& spec : sections) {
    const SectionKey key = SectionKey::from_miles(spec.route_name, spec.offset_from, spec.offset_to);
    const std::string id = key.id();
    auto line = lines.find(spec.route_name);
    if (line == lines.end()) {
      log.warn("report", "no centerline for section", {{"section", key.describe()}});
      continue;
    }
    geo::SectionPolygon poly;
    try {
      poly = geo::section_polygon(line->second, spec, buffer_options(cfg, cfg.geo.crs));
    } catch (const Error& e) {
      log.warn("report", "section skipped", {{"section", key.describe()}, {"reason", e.what()}});
      continue;
    }
    ojson ring = ojson::array();
    for (const auto& p : poly.ring) ring.push_back({p.x, p.y});

    ojson props;
    props["sample_id"] = id;
    props["route_name"] = spec.route_name;
    props["offset_from"] = key.offset_from();
    props["offset_to"] = key.offset_to();
    auto lab = labels.find(key);
    props["condition_score"] = lab != labels.end() ? ojson(lab->second.condition_score) : ojson(nullptr);
    auto t = truth.find(id);
    if (t != truth.end()) {
      props["condition_class_true"] = std::string(pmis::class_name(pmis::class_from_index(t->second.second)));
      props["split"] = t->second.first;
    } else if (lab != labels.end()) {
      props["condition_class_true"] = std::string(pmis::class_name(lab->second.condition_class));
      props["split"] = nullptr;
    } else {
      props["condition_class_true"] = nullptr;
      props["split"] = nullptr;
    }
    auto p = pred_index.find(id);
    if (p != pred_index.end()) {
      props["condition_class_pred"] = std::string(pmis::class_name(pmis::class_from_index(ens.predicted[p->second])));
      ojson probs;
      for (auto cls : pmis::kAllClasses) {
        probs[std::string(pmis::class_name(cls))] = ens.rows[p->second][pmis::class_index(cls)];
      }
      props["probabilities"] = probs;
    } else {
      props["condition_class_pred"] = nullptr;
      props["probabilities"] = nullptr;
    }
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", ojson::array({ring})}}},
                        {"properties", props}});
  }
  const std::size_t count = features.size();
  fc["features"] = std::move(features);
  fs::create_directories(wd.root);
  std::ofstream out(wd.report(), std::ios::trunc);
  if (!out) throw Error("cannot write " + wd.report().string());
  out << fc.dump(1) << "\n";
  log.info("report", "wrote report", {{"features", std::to_string(count)}, {"path", wd.report().string()}});
  return count;
}

}  // namespace pavesat::pipeline
