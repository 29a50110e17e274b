#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace pavesat::dataset {

/// Decoded section image: float samples on the 0..255 scale, channel
/// interleaved, plus a 0/1 mask marking pixels that belong to the section.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<float> pixels;
  std::vector<std::uint8_t> mask;

  static Image blank(int width, int height, int channels = 3);

  float& at(int x, int y, int c) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t& mask_at(int x, int y) { return mask[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t mask_at(int x, int y) const { return mask[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const Image&, const Image&) = default;
};

/// Reads an RGBA section PNG; alpha > 0 marks the mask.
Image read_image_png(const std::filesystem::path& path);
/// Writes RGB + alpha-as-mask, rounding samples to 8 bits.
void write_image_png(const std::filesystem::path& path, const Image& image);

}  // namespace pavesat::dataset
