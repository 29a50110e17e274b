#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "pavesat/dataset/image.hpp"
#include "pavesat/random.hpp"

namespace pavesat::dataset {

enum class Resampling { Bilinear, Nearest };

struct AugmentationConfig {
  double rotation_max_deg = 15.0;
  double horizontal_flip_prob = 0.5;
  double vertical_flip_prob = 0.0;
  std::pair<double, double> zoom_range = {0.9, 1.1};
  double shift_max_fraction = 0.1;
  std::pair<double, double> brightness_range = {0.8, 1.2};
  std::uint64_t seed = 0;
  Resampling resampling = Resampling::Bilinear;

  void validate() const;
  /// Config whose draws all leave the image unchanged.
  static AugmentationConfig identity();
};

/// One concrete draw of the augmentation parameters.
struct AugmentParams {
  double rotation_deg = 0.0;
  bool flip_horizontal = false;
  bool flip_vertical = false;
  double zoom = 1.0;
  double shift_x = 0.0;  // fraction of width
  double shift_y = 0.0;  // fraction of height
  double brightness = 1.0;
};

/// Draws in a fixed order: rotation, horizontal flip, vertical flip,
/// zoom, shift x, shift y, brightness. Every draw is consumed even when
/// its range is degenerate, so the stream layout never changes.
AugmentParams draw_augment_params(const AugmentationConfig& cfg, Rng& rng);

/// Applies rotate -> flip -> zoom -> shift about the image center as one
/// resampling pass, then multiplies brightness and clamps to [0, 255].
/// The mask follows the same geometry; a pixel stays unmasked only when
/// every source pixel it draws from is unmasked.
Image apply_augmentation(const Image& image, const AugmentParams& params,
                         Resampling resampling = Resampling::Bilinear);

Image augment(const Image& image, const AugmentationConfig& cfg, Rng& rng);

/// Per-sample stream so augmentation is independent of processing order.
std::uint64_t augment_stream_seed(std::uint64_t seed, std::string_view sample_id, int epoch);

/// Fixed-size network input: CHW floats in [0, 1].
struct NormalizedImage {
  int channels = 3;
  int height = 0;
  int width = 0;
  std::vector<float> values;
  std::vector<std::uint8_t> mask;
};

/// Letterboxes into height x width (aspect preserved, centered, padding
/// masked and zero) using mask-aware area resampling, then scales to [0, 1].
/// Throws DegenerateInputError when the image is fully masked.
NormalizedImage normalize(const Image& image, int height, int width);

}  // namespace pavesat::dataset
