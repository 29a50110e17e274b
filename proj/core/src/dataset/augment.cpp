#include "pavesat/dataset/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pavesat/error.hpp"

namespace pavesat::dataset {
namespace {

bool contains_one(const std::pair<double, double>& r) { return r.first <= 1.0 && 1.0 <= r.second; }

}  // namespace

void AugmentationConfig::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError(std::string(name) + " must lie in [0, 1]");
  };
  prob(horizontal_flip_prob, "horizontal_flip_prob");
  prob(vertical_flip_prob, "vertical_flip_prob");
  if (!(rotation_max_deg >= 0.0)) throw ParameterError("rotation_max_deg must be >= 0");
  if (!(shift_max_fraction >= 0.0 && shift_max_fraction < 1.0)) {
    throw ParameterError("shift_max_fraction must lie in [0, 1)");
  }
  if (!contains_one(zoom_range) || !(zoom_range.first > 0.0)) {
    throw ParameterError("zoom_range must be positive and contain 1.0");
  }
  if (!contains_one(brightness_range) || !(brightness_range.first >= 0.0)) {
    throw ParameterError("brightness_range must be nonnegative and contain 1.0");
  }
}

AugmentationConfig AugmentationConfig::identity() {
  AugmentationConfig c;
  c.rotation_max_deg = 0.0;
  c.horizontal_flip_prob = 0.0;
  c.vertical_flip_prob = 0.0;
  c.zoom_range = {1.0, 1.0};
  c.shift_max_fraction = 0.0;
  c.brightness_range = {1.0, 1.0};
  return c;
}

AugmentParams draw_augment_params(const AugmentationConfig& cfg, Rng& rng) {
  AugmentParams p;
  p.rotation_deg = rng.uniform(-cfg.rotation_max_deg, cfg.rotation_max_deg);
  p.flip_horizontal = rng.bernoulli(cfg.horizontal_flip_prob);
  p.flip_vertical = rng.bernoulli(cfg.vertical_flip_prob);
  p.zoom = rng.uniform(cfg.zoom_range.first, cfg.zoom_range.second);
  p.shift_x = rng.uniform(-cfg.shift_max_fraction, cfg.shift_max_fraction);
  p.shift_y = rng.uniform(-cfg.shift_max_fraction, cfg.shift_max_fraction);
  p.brightness = rng.uniform(cfg.brightness_range.first, cfg.brightness_range.second);
  return p;
}

Image apply_augmentation(const Image& src, const AugmentParams& p, Resampling resampling) {
  const int w = src.width;
  const int h = src.height;
  Image out = Image::blank(w, h, src.channels);
  std::fill(out.mask.begin(), out.mask.end(), 0);

  // Forward map on continuous coordinates about the center c:
  //   q = c + shift + zoom * F * R * (p - c)
  // Sampling needs the inverse: p = c + R^T * F * (q - c - shift) / zoom.
  const double cx = 0.5 * w;
  const double cy = 0.5 * h;
  const double theta = p.rotation_deg * std::numbers::pi / 180.0;
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  const double fx = p.flip_horizontal ? -1.0 : 1.0;
  const double fy = p.flip_vertical ? -1.0 : 1.0;
  const double tx = p.shift_x * w;
  const double ty = p.shift_y * h;
  const bool identity_geometry = p.rotation_deg == 0.0 && !p.flip_horizontal && !p.flip_vertical &&
                                 p.zoom == 1.0 && tx == 0.0 && ty == 0.0;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (identity_geometry) {
        out.mask_at(x, y) = src.mask_at(x, y);
        for (int c = 0; c < src.channels; ++c) out.at(x, y, c) = src.at(x, y, c);
        continue;
      }
      const double qx = (x + 0.5 - cx - tx) / p.zoom * fx;
      const double qy = (y + 0.5 - cy - ty) / p.zoom * fy;
      const double sx = cx + cs * qx + sn * qy - 0.5;  // source pixel-index space
      const double sy = cy - sn * qx + cs * qy - 0.5;

      if (resampling == Resampling::Nearest) {
        const int ix = static_cast<int>(std::lround(sx));
        const int iy = static_cast<int>(std::lround(sy));
        if (ix < 0 || iy < 0 || ix >= w || iy >= h || !src.mask_at(ix, iy)) continue;
        out.mask_at(x, y) = 1;
        for (int c = 0; c < src.channels; ++c) out.at(x, y, c) = src.at(ix, iy, c);
        continue;
      }

      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const double ax = sx - x0;
      const double ay = sy - y0;
      const double wts[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
      const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
      const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
      bool ok = true;
      for (int k = 0; k < 4 && ok; ++k) {
        if (wts[k] <= 0.0) continue;
        ok = xs[k] >= 0 && ys[k] >= 0 && xs[k] < w && ys[k] < h && src.mask_at(xs[k], ys[k]);
      }
      if (!ok) continue;
      out.mask_at(x, y) = 1;
      for (int c = 0; c < src.channels; ++c) {
        double v = 0.0;
        for (int k = 0; k < 4; ++k) {
          if (wts[k] > 0.0) v += wts[k] * src.at(xs[k], ys[k], c);
        }
        out.at(x, y, c) = static_cast<float>(v);
      }
    }
  }

  if (p.brightness != 1.0) {
    for (auto& v : out.pixels) v = std::clamp(static_cast<float>(v * p.brightness), 0.0f, 255.0f);
  }
  return out;
}

Image augment(const Image& image, const AugmentationConfig& cfg, Rng& rng) {
  return apply_augmentation(image, draw_augment_params(cfg, rng), cfg.resampling);
}

std::uint64_t augment_stream_seed(std::uint64_t seed, std::string_view sample_id, int epoch) {
  return derive_seed(derive_seed(seed, sample_id), "epoch", epoch);
}

NormalizedImage normalize(const Image& image, int height, int width) {
  if (height <= 0 || width <= 0) throw ParameterError("normalize target must be positive");
  if (image.width <= 0 || image.height <= 0 ||
      std::none_of(image.mask.begin(), image.mask.end(), [](auto m) { return m != 0; })) {
    throw DegenerateInputError("image has no unmasked pixels");
  }
  NormalizedImage out;
  out.channels = 3;
  out.height = height;
  out.width = width;
  out.values.assign(static_cast<std::size_t>(3) * height * width, 0.0f);
  out.mask.assign(static_cast<std::size_t>(height) * width, 0);

  const double scale = std::min(static_cast<double>(width) / image.width,
                                static_cast<double>(height) / image.height);
  const double placed_w = image.width * scale;
  const double placed_h = image.height * scale;
  const double off_x = std::floor((width - placed_w) / 2.0);
  const double off_y = std::floor((height - placed_h) / 2.0);

  std::vector<double> acc(3);
  for (int oy = 0; oy < height; ++oy) {
    const double sy0 = (oy - off_y) / scale;
    const double sy1 = (oy + 1 - off_y) / scale;
    if (sy1 <= 0.0 || sy0 >= image.height) continue;
    for (int ox = 0; ox < width; ++ox) {
      const double sx0 = (ox - off_x) / scale;
      const double sx1 = (ox + 1 - off_x) / scale;
      if (sx1 <= 0.0 || sx0 >= image.width) continue;
      std::fill(acc.begin(), acc.end(), 0.0);
      double covered = 0.0;
      double footprint = 0.0;
      const int ix0 = std::max(0, static_cast<int>(std::floor(sx0)));
      const int ix1 = std::min(image.width, static_cast<int>(std::ceil(sx1)));
      const int iy0 = std::max(0, static_cast<int>(std::floor(sy0)));
      const int iy1 = std::min(image.height, static_cast<int>(std::ceil(sy1)));
      for (int iy = iy0; iy < iy1; ++iy) {
        const double wy = std::min<double>(iy + 1, sy1) - std::max<double>(iy, sy0);
        for (int ix = ix0; ix < ix1; ++ix) {
          const double wx = std::min<double>(ix + 1, sx1) - std::max<double>(ix, sx0);
          const double wgt = wx * wy;
          if (wgt <= 0.0) continue;
          footprint += wgt;
          if (!image.mask_at(ix, iy)) continue;
          covered += wgt;
          for (int c = 0; c < 3; ++c) acc[c] += wgt * image.at(ix, iy, image.channels == 3 ? c : 0);
        }
      }
      if (covered <= 0.0 || covered < 0.5 * footprint) continue;
      const auto o = static_cast<std::size_t>(oy) * width + ox;
      out.mask[o] = 1;
      for (int c = 0; c < 3; ++c) {
        out.values[static_cast<std::size_t>(c) * height * width + o] =
            static_cast<float>(std::clamp(acc[c] / covered / 255.0, 0.0, 1.0));
      }
    }
  }
  return out;
}

}  // namespace pavesat::dataset
