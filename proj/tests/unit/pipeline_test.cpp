#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "pavesat/csv.hpp"
#include "pavesat/ensemble/interchange.hpp"
#include "pavesat/error.hpp"
#include "pavesat/geo/geotiff.hpp"
#include "pavesat/geo/io.hpp"
#include "pavesat/metrics/io.hpp"
#include "pavesat/model/serialize.hpp"
#include "pavesat/pipeline/commands.hpp"
#include "pavesat/pipeline/config.hpp"
#include "pavesat/pipeline/synthetic.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace pavesat;
using namespace pavesat::pipeline;

namespace {

// One 200 x 100 tile, 1 unit per pixel and 100 ft per unit, with a route
// running along y = 50. Six half-mile sections fit; two more cannot.
PipelineConfig geo_fixture(const testutil::TempDir& dir) {
  auto raster = geo::GeoRaster::blank(200, 100, 3, geo::AffineGeoTransform(0, 100, 1, -1), "EPSG:2277");
  for (int y = 0; y < 100; ++y) {
    for (int x = 0; x < 200; ++x) {
      for (int b = 0; b < 3; ++b) raster.at(x, y, b) = static_cast<std::uint8_t>(1 + (x + 3 * y + 50 * b) % 250);
    }
  }
  fs::create_directories(dir / "tiles");
  geo::write_geotiff(dir / "tiles" / "t.tif", raster, {geo::TiffCompression::Deflate, true, 64});

  testutil::write_file(dir / "centerlines.csv",
                      "route_id,milepoint,x,y\nR,0,10,50\nR," + csv::format_number(180 / 52.8) + ",190,50\n");
  std::string sections = "route_name,offset_from,offset_to\n";
  std::string pmis = "route_name,offset_from,offset_to,condition_score\n";
  const double scores[] = {95, 80, 60, 40, 20, 92};
  for (int i = 0; i < 6; ++i) {
    const auto from = csv::format_number(0.5 * i), to = csv::format_number(0.5 * i + 0.5);
    sections += "R," + from + "," + to + "\n";
    pmis += "R," + from + "," + to + "," + csv::format_number(scores[i]) + "\n";
  }
  sections += "R,5,6\nQ,0,1\n";
  pmis += "R,9,9.5,50\n";
  testutil::write_file(dir / "sections.csv", sections);
  testutil::write_file(dir / "pmis.csv", pmis);

  const std::string json = R"({
    "seed": 3,
    "workdir": "work",
    "paths": {"rasters": "tiles", "centerlines": "centerlines.csv", "sections": "sections.csv", "pmis": "pmis.csv"},
    "geo": {"half_width_ft": 500, "units_per_foot": 0.01},
    "dataset": {"train_fraction": 0.5, "stratified": false, "input_height": 16, "input_width": 16}
  })";
  return parse_config(json, dir.path());
}

std::string sample(int i) {
  return SectionKey::from_miles("R", 0.5 * i, 0.5 * i + 0.5).id();
}

}  // namespace

TEST(Pipeline, ExtractScoreBuildEvaluateReport) {
  testutil::TempDir dir;
  const auto cfg = geo_fixture(dir);
  auto& log = Logger::null();
  const Workdir wd{cfg.workdir};

  const auto ex = cmd_extract(cfg, log);
  EXPECT_EQ(ex.sections, 8u);
  EXPECT_EQ(ex.written, 6u);
  EXPECT_EQ(ex.failed, 2u);
  EXPECT_TRUE(fs::exists(wd.crops() / (sample(0) + ".png")));
  const auto side = geo::read_sidecar(wd.crops() / (sample(2) + ".json"));
  EXPECT_EQ(side.route_name, "R");
  EXPECT_EQ(side.offset_from, 1.0);
  EXPECT_EQ(side.crs_id, "EPSG:2277");
  // Half a mile is 26.4 units long and the buffer 10 units wide.
  EXPECT_NEAR(side.pixel_window.width, 27, 1);
  EXPECT_NEAR(side.pixel_window.height, 10, 1);
  const auto report = csv::read(wd.coverage_report());
  ASSERT_EQ(report.rows.size(), 8u);
  const auto status = report.column("status");
  EXPECT_EQ(report.rows[0][status], "ok");
  EXPECT_EQ(report.rows[6][status], "failed");
  EXPECT_NE(report.rows[7][report.column("reason")].find("'Q'"), std::string::npos);

  EXPECT_EQ(cmd_score(cfg, log), 7u);
  const auto labels = pmis::read_labels(wd.labels());
  EXPECT_EQ(labels[2].condition_class, pmis::ConditionClass::Fair);

  const auto manifest = cmd_build(cfg, log);
  EXPECT_EQ(manifest.test.size(), 3u);
  const auto rejects = csv::read(wd.rejects());
  ASSERT_EQ(rejects.rows.size(), 1u);
  EXPECT_EQ(rejects.rows[0][0], "R");
  EXPECT_EQ(rejects.rows[0][3], "PMIS record without image");

  // A fake model that is right on every test sample but the first.
  ensemble::ModelPrediction pred;
  pred.model_id = "oracle";
  for (std::size_t i = 0; i < manifest.test.size(); ++i) {
    ensemble::ProbabilityRow row{};
    const int c = pmis::class_index(manifest.test[i].label);
    row[i == 0 ? (c + 1) % 5 : c] = 1.0;
    pred.sample_ids.push_back(manifest.test[i].sample_id);
    pred.rows.push_back(row);
  }
  fs::create_directories(dir / "preds");
  ensemble::write_predictions({pred}, dir / "preds" / "oracle.csv");
  const auto ens = cmd_ensemble(cfg, {dir / "preds" / "oracle.csv"}, {}, log);
  EXPECT_EQ(ens.sample_ids, pred.sample_ids);

  const auto summary = cmd_evaluate(cfg, {}, log);
  EXPECT_EQ(summary.total, 3);
  EXPECT_EQ(summary.correct, 2);
  EXPECT_EQ(metrics::read_confusion(wd.eval_dir() / "confusion.csv").total(), 3);
  EXPECT_TRUE(fs::exists(wd.eval_dir() / "learning_curves.csv"));

  EXPECT_EQ(cmd_report(cfg, log), 6u);
  const auto geojson = nlohmann::json::parse(testutil::read_file(wd.report()));
  EXPECT_EQ(geojson["type"], "FeatureCollection");
  ASSERT_EQ(geojson["features"].size(), 6u);
  int predicted = 0;
  for (const auto& f : geojson["features"]) {
    const auto& props = f["properties"];
    EXPECT_EQ(f["geometry"]["type"], "Polygon");
    EXPECT_FALSE(props["condition_score"].is_null());
    EXPECT_FALSE(props["split"].is_null());
    if (!props["condition_class_pred"].is_null()) {
      ++predicted;
      EXPECT_EQ(props["split"], "test");
      EXPECT_EQ(props["probabilities"].size(), 5u);
    }
  }
  EXPECT_EQ(predicted, 3);
  EXPECT_EQ(geojson["features"][0]["properties"]["sample_id"], sample(0));
}

TEST(Pipeline, ExtractRejectsMixedCrs) {
  testutil::TempDir dir;
  auto cfg = geo_fixture(dir);
  cfg.geo.crs = "EPSG:32614";
  EXPECT_THROW(cmd_extract(cfg, Logger::null()), CrsError);
}

TEST(Pipeline, TrainPredictEnsembleOnSyntheticCrops) {
  testutil::TempDir dir;
  SyntheticConfig syn;
  syn.class_counts = {6, 6, 6, 6, 6};
  syn.size = 16;
  syn.seed = 2;
  const auto s = write_synthetic(dir / "work", syn);
  EXPECT_EQ(s.images, 30u);

  auto cfg = parse_config(R"({
    "seed": 5,
    "workdir": "work",
    "paths": {"pmis": "work/pmis.csv"},
    "dataset": {"input_height": 16, "input_width": 16},
    "model": {"conv_blocks": [{"filters": 4, "stride": 1, "pool": true}]},
    "train": {"epochs": 2, "batch_size": 8}
  })", dir.path());
  auto& log = Logger::null();
  cmd_score(cfg, log);
  const auto manifest = cmd_build(cfg, log);
  // 24 of 30 go to training; one class keeps only 4 and is oversampled to 5.
  EXPECT_EQ(manifest.test.size(), 6u);
  EXPECT_EQ(manifest.train_counts_after, (dataset::ClassCounts{5, 5, 5, 5, 5}));

  const auto h1 = cmd_train(cfg, "m1", log);
  EXPECT_EQ(h1.epochs.size(), 2u);
  const Workdir wd{cfg.workdir};
  EXPECT_EQ(model::read_history(wd.history("m1")).epochs.size(), 2u);
  cmd_train(cfg, "m2", log);
  // Model ids seed training, so two names give two networks.
  EXPECT_NE(testutil::read_file(wd.weights("m1")), testutil::read_file(wd.weights("m2")));

  const auto p1 = cmd_predict(cfg, "m1", "test", log);
  cmd_predict(cfg, "m2", "test", log);
  EXPECT_EQ(p1.sample_ids.size(), 6u);
  const auto acc = ensemble::read_accuracies(wd.accuracies());
  ASSERT_EQ(acc.size(), 2u);
  int correct = 0;
  for (std::size_t i = 0; i < p1.sample_ids.size(); ++i) {
    correct += ensemble::argmax(p1.rows[i]) == pmis::class_index(manifest.find(p1.sample_ids[i])->label);
  }
  EXPECT_EQ(acc.at("m1"), correct / 6.0);

  cfg.ensemble.top_k = 1;
  const auto best = cmd_ensemble(cfg, {}, {}, log);
  EXPECT_EQ(best.sample_ids, p1.sample_ids);
  cfg.ensemble = {ensemble::CombineMode::AccuracyWeighted, 0};
  if (acc.at("m1") + acc.at("m2") > 0) EXPECT_NO_THROW(cmd_ensemble(cfg, {}, {}, log));

  auto masked = cfg;
  masked.model.network.mask_input = true;
  EXPECT_THROW(cmd_predict(masked, "m1", "test", log), ShapeError);
  auto resized = cfg;
  resized.dataset.input_height = 32;
  EXPECT_THROW(cmd_predict(resized, "m1", "test", log), ShapeError);
  EXPECT_THROW(cmd_predict(cfg, "m1", "validation", log), ParameterError);
  EXPECT_THROW(cmd_train(cfg, "../escape", log), ParameterError);

  // Masked pooling trains, saves its flag, and predicts.
  cmd_train(masked, "masked", log);
  EXPECT_TRUE(model::load_network(wd.weights("masked")).config().mask_input);
  EXPECT_EQ(cmd_predict(masked, "masked", "train", log).sample_ids.size(), 24u);

  const auto input = load_input(wd.root / manifest.test[0].image_ref, masked, std::nullopt);
  EXPECT_EQ(input.size(), 4u * 16 * 16);
  EXPECT_EQ(load_input(wd.root / manifest.test[0].image_ref, cfg, 7u),
            load_input(wd.root / manifest.test[0].image_ref, cfg, 7u));
}

TEST(Config, DefaultsAndOverrides) {
  const auto d = parse_config("{}");
  EXPECT_EQ(d.model.network.conv_blocks.size(), 3u);
  EXPECT_EQ(d.network().input_height, 224);
  EXPECT_FALSE(d.network().mask_input);
  EXPECT_EQ(d.train.epochs, 50);
  EXPECT_EQ(d.workdir, "work");

  const auto c = parse_config(R"({
    "seed": 9,
    "paths": {"pmis": "data/pmis.csv", "rasters": "/abs/tiles"},
    "geo": {"lonlat_projection": {"central_meridian": -99, "scale_factor": 0.9996, "false_easting": 500000}},
    "dataset": {"input_height": 32, "input_width": 48,
                "augmentation": {"rotation_max_deg": 0, "zoom_range": [1, 1.1], "resampling": "nearest"}},
    "model": {"hidden": [16], "masked_pooling": true},
    "ensemble": {"mode": "accuracy_weighted", "top_k": 4},
    "metrics": {"averaging": "macro"}
  })", "/base");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.paths.pmis, fs::path("/base/data/pmis.csv"));
  EXPECT_EQ(c.paths.rasters, fs::path("/abs/tiles"));
  EXPECT_EQ(c.workdir, fs::path("work"));
  ASSERT_TRUE(c.geo.lonlat_projection.has_value());
  EXPECT_EQ(c.geo.lonlat_projection->false_easting, 500000.0);
  EXPECT_EQ(c.network().input_width, 48);
  EXPECT_TRUE(c.network().mask_input);
  EXPECT_EQ(c.network().hidden.size(), 1u);
  EXPECT_EQ(c.dataset.augmentation.resampling, dataset::Resampling::Nearest);
  EXPECT_EQ(c.dataset.augmentation.zoom_range.second, 1.1);
  EXPECT_EQ(c.ensemble.top_k, 4u);
  EXPECT_EQ(c.averaging, metrics::Averaging::Macro);
  EXPECT_NE(stage_seed(c, "split"), stage_seed(c, "oversample"));
}

TEST(Config, ErrorsNameTheProblem) {
  auto message = [](const std::string& json) {
    try {
      parse_config(json);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"trian": {}})").find("'trian'"), std::string::npos);
  EXPECT_NE(message(R"({"train": {"epoch": 3}})").find("'epoch'"), std::string::npos);
  EXPECT_THROW(parse_config("{"), FormatError);
  EXPECT_THROW(parse_config(R"({"train": {"epochs": "many"}})"), ParameterError);
  EXPECT_THROW(parse_config(R"({"train": {"epochs": 0}})"), ParameterError);
  EXPECT_THROW(parse_config(R"({"dataset": {"input_height": 4}})"), ShapeError);
  EXPECT_THROW(parse_config(R"({"dataset": {"augmentation": {"zoom_range": [1]}}})"), ParameterError);
  EXPECT_THROW(parse_config(R"({"ensemble": {"mode": "vote"}})"), ParameterError);
  EXPECT_THROW(parse_config(R"({"geo": {"half_width_ft": -1}})"), ParameterError);

  testutil::TempDir dir;
  testutil::write_file(dir / "c.json", R"({"paths": {"pmis": "p.csv"}})");
  EXPECT_EQ(load_config(dir / "c.json").paths.pmis, (dir / "p.csv").lexically_normal());
  EXPECT_THROW(load_config(dir / "missing.json"), Error);
}

TEST(Logger, TextAndJsonLines) {
  std::ostringstream text, json;
  Logger t(&text, false, LogLevel::Info);
  t.debug("build", "hidden");
  t.info("build", "wrote manifest", {{"train", "560"}, {"test", "100"}});
  const auto line = text.str();
  EXPECT_EQ(std::count(line.begin(), line.end(), '\n'), 1);
  EXPECT_NE(line.find(" INFO build: wrote manifest train=560 test=100\n"), std::string::npos);
  EXPECT_EQ(line[4], '-');

  Logger j(&json, true, LogLevel::Debug);
  j.warn("extract", "section failed", {{"reason", "no tile"}});
  const auto obj = nlohmann::json::parse(json.str());
  EXPECT_EQ(obj["level"], "WARN");
  EXPECT_EQ(obj["stage"], "extract");
  EXPECT_EQ(obj["reason"], "no tile");
  EXPECT_TRUE(obj.contains("time"));
  Logger::null().error("x", "dropped");
}
