#include "pavesat/pipeline/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "pavesat/csv.hpp"
#include "pavesat/error.hpp"
#include "pavesat/geo/io.hpp"
#include "pavesat/pmis/io.hpp"
#include "pavesat/section_key.hpp"

namespace fs = std::filesystem;

namespace pavesat::pipeline {
namespace {

struct Severity {
  int cracks_min, cracks_max;
  double crack_len_min, crack_len_max;
  int potholes_min, potholes_max;
  double score_min, score_max;
};

// Score ranges sit inside the class intervals.
Severity severity(pmis::ConditionClass cls) {
  switch (cls) {
    case pmis::ConditionClass::VeryGood: return {0, 0, 0, 0, 0, 0, 90, 100};
    case pmis::ConditionClass::Good: return {2, 2, 18, 26, 0, 0, 70, 89.9};
    case pmis::ConditionClass::Fair: return {5, 6, 18, 26, 0, 0, 50, 69.9};
    case pmis::ConditionClass::Poor: return {10, 11, 18, 26, 1, 1, 35, 49.9};
    case pmis::ConditionClass::VeryPoor: return {17, 20, 18, 26, 2, 3, 1, 34.9};
  }
  return {};
}

// Smooth value noise on a coarse lattice, bilinearly interpolated.
std::vector<float> value_noise(int size, int cell, Rng& rng) {
  const int n = size / cell + 2;
  std::vector<float> lattice(static_cast<std::size_t>(n) * n);
  for (auto& v : lattice) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  std::vector<float> out(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double fx = static_cast<double>(x) / cell, fy = static_cast<double>(y) / cell;
      const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
      const double tx = fx - ix, ty = fy - iy;
      auto L = [&](int a, int b) { return lattice[static_cast<std::size_t>(b) * n + a]; };
      const double top = L(ix, iy) * (1 - tx) + L(ix + 1, iy) * tx;
      const double bot = L(ix, iy + 1) * (1 - tx) + L(ix + 1, iy + 1) * tx;
      out[static_cast<std::size_t>(y) * size + x] = static_cast<float>(top * (1 - ty) + bot * ty);
    }
  }
  return out;
}

void darken_disc(std::vector<float>& shade, int size, double cx, double cy, double r, double factor) {
  const int x0 = std::max(0, static_cast<int>(cx - r - 1)), x1 = std::min(size - 1, static_cast<int>(cx + r + 1));
  const int y0 = std::max(0, static_cast<int>(cy - r - 1)), y1 = std::min(size - 1, static_cast<int>(cy + r + 1));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double d = std::hypot(x + 0.5 - cx, y + 0.5 - cy);
      if (d <= r) {
        float& s = shade[static_cast<std::size_t>(y) * size + x];
        s = std::min(s, static_cast<float>(factor));
      }
    }
  }
}

void draw_crack(std::vector<float>& shade, int size, Rng& rng, double length) {
  double x = rng.uniform(0, size), y = rng.uniform(0, size);
  double dir = rng.uniform(0, 2 * std::numbers::pi);
  const double width = rng.uniform(1.3, 1.9);
  const double darkness = rng.uniform(0.25, 0.45);
  for (double t = 0; t < length; t += 0.7) {
    darken_disc(shade, size, x, y, width, darkness);
    dir += rng.uniform(-0.35, 0.35);
    x += 0.7 * std::cos(dir);
    y += 0.7 * std::sin(dir);
    if (rng.bernoulli(0.02)) dir += rng.uniform(-1.2, 1.2);  // branch-like kink
  }
}

}  // namespace

dataset::Image render_texture(pmis::ConditionClass cls, int size, Rng& rng) {
  if (size < 8) throw ParameterError("synthetic image size must be >= 8");
  const Severity sev = severity(cls);
  dataset::Image img = dataset::Image::blank(size, size, 3);
  std::fill(img.mask.begin(), img.mask.end(), std::uint8_t{1});

  const double base = rng.uniform(95, 140);
  const double tint[3] = {rng.uniform(0.97, 1.03), rng.uniform(0.97, 1.03), rng.uniform(0.97, 1.03)};
  const auto coarse = value_noise(size, 16, rng);
  const auto medium = value_noise(size, 4, rng);
  const auto fine = value_noise(size, 2, rng);

  std::vector<float> shade(static_cast<std::size_t>(size) * size, 1.0f);
  const int cracks = sev.cracks_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(sev.cracks_max - sev.cracks_min + 1)));
  const double area_scale = static_cast<double>(size) / 64.0;
  for (int i = 0; i < cracks; ++i) {
    draw_crack(shade, size, rng, rng.uniform(sev.crack_len_min, sev.crack_len_max) * area_scale);
  }
  const int holes = sev.potholes_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(sev.potholes_max - sev.potholes_min + 1)));
  for (int i = 0; i < holes; ++i) {
    darken_disc(shade, size, rng.uniform(4, size - 4), rng.uniform(4, size - 4), rng.uniform(2.5, 4.5) * area_scale,
                rng.uniform(0.3, 0.5));
  }

  std::vector<double> gray(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * size + x;
      // Two-pixel grain plus a little per-pixel sensor noise.
      const double grain = 14.0 * fine[i] + (rng.uniform() - 0.5) * 6.0;
      gray[i] = (base + 10.0 * coarse[i] + 8.0 * medium[i] + grain) * shade[i];
    }
  }
  // Sensor point spread: separable [1 2 1] / 4 with clamped edges.
  auto blur = [&](bool horizontal) {
    std::vector<double> out(gray.size());
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        auto g = [&](int dx, int dy) {
          const int xx = std::clamp(x + dx, 0, size - 1), yy = std::clamp(y + dy, 0, size - 1);
          return gray[static_cast<std::size_t>(yy) * size + xx];
        };
        out[static_cast<std::size_t>(y) * size + x] =
            horizontal ? 0.25 * g(-1, 0) + 0.5 * g(0, 0) + 0.25 * g(1, 0) : 0.25 * g(0, -1) + 0.5 * g(0, 0) + 0.25 * g(0, 1);
      }
    }
    gray.swap(out);
  };
  blur(true);
  blur(false);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double v = gray[static_cast<std::size_t>(y) * size + x];
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<float>(std::clamp(std::round(v * tint[c]), 0.0, 255.0));
    }
  }
  return img;
}

SyntheticSummary write_synthetic(const fs::path& workdir, const SyntheticConfig& cfg) {
  if (cfg.section_miles <= 0) throw ParameterError("section length must be positive");
  std::vector<pmis::ConditionClass> classes;
  for (auto cls : pmis::kAllClasses) {
    const int count = cfg.class_counts[pmis::class_index(cls)];
    if (count < 0) throw ParameterError("class counts must be nonnegative");
    classes.insert(classes.end(), static_cast<std::size_t>(count), cls);
  }
  if (classes.empty()) throw ParameterError("synthetic dataset is empty");
  Rng order_rng(derive_seed(cfg.seed, "synthetic:order"));
  order_rng.shuffle(classes.begin(), classes.end());

  const fs::path crops = workdir / "crops";
  fs::create_directories(crops);
  SyntheticSummary summary;
  summary.centerlines = workdir / "centerlines.csv";
  summary.sections = workdir / "sections.csv";
  summary.pmis = workdir / "pmis.csv";

  std::ofstream sections(summary.sections, std::ios::trunc);
  std::ofstream pmis_out(summary.pmis, std::ios::trunc);
  sections << "route_name,offset_from,offset_to\n";
  pmis_out << "route_name,offset_from,offset_to,condition_score\n";
  std::vector<pmis::LabelRow> labels;

  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto key = SectionKey::from_miles(cfg.route, static_cast<double>(i) * cfg.section_miles,
                                            static_cast<double>(i + 1) * cfg.section_miles);
    Rng rng(derive_seed(cfg.seed, "synthetic:image", static_cast<std::int64_t>(i)));
    const auto img = render_texture(classes[i], cfg.size, rng);
    const Severity sev = severity(classes[i]);
    const double score = std::round(rng.uniform(sev.score_min, sev.score_max) * 10.0) / 10.0;

    const std::string id = key.id();
    dataset::write_image_png(crops / (id + ".png"), img);
    geo::write_sidecar(crops / (id + ".json"),
                       {cfg.route, key.offset_from(), key.offset_to(), {0, 0, cfg.size, cfg.size}, "synthetic"});
    csv::write_row(sections, {cfg.route, csv::format_number(key.offset_from()), csv::format_number(key.offset_to())});
    csv::write_row(pmis_out, {cfg.route, csv::format_number(key.offset_from()), csv::format_number(key.offset_to()),
                              csv::format_number(score)});
    labels.push_back({key, score, pmis::classify(pmis::ConditionScore(score))});
    ++summary.images;
  }
  pmis::write_labels(workdir / "labels.csv", labels);

  std::ofstream lines(summary.centerlines, std::ios::trunc);
  lines << "route_id,milepoint,x,y\n";
  const double end = static_cast<double>(classes.size()) * cfg.section_miles;
  csv::write_row(lines, {cfg.route, "0", "0", "0"});
  csv::write_row(lines, {cfg.route, csv::format_number(end), csv::format_number(end * 5280.0), "0"});
  if (!sections || !pmis_out || !lines) throw Error("failed writing synthetic dataset in " + workdir.string());
  return summary;
}

}  // namespace pavesat::pipeline
