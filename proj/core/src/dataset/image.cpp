#include "pavesat/dataset/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>

#include "pavesat/error.hpp"

namespace pavesat::dataset {

Image Image::blank(int width, int height, int channels) {
  Image img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.pixels.assign(static_cast<std::size_t>(width) * height * channels, 0.0f);
  img.mask.assign(static_cast<std::size_t>(width) * height, 1);
  return img;
}

Image read_image_png(const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  const auto name = path.string();
  if (!png_image_begin_read_from_file(&png, name.c_str())) {
    throw FormatError("cannot read PNG " + name + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, rgba.data(), 0, nullptr)) {
    throw FormatError("cannot decode PNG " + name + ": " + png.message);
  }
  Image img = Image::blank(static_cast<int>(png.width), static_cast<int>(png.height), 3);
  for (std::size_t i = 0; i < img.mask.size(); ++i) {
    for (int c = 0; c < 3; ++c) img.pixels[i * 3 + c] = rgba[i * 4 + c];
    img.mask[i] = rgba[i * 4 + 3] > 0 ? 1 : 0;
  }
  return img;
}

void write_image_png(const std::filesystem::path& path, const Image& image) {
  std::vector<std::uint8_t> rgba(static_cast<std::size_t>(image.width) * image.height * 4);
  for (std::size_t i = 0; i < image.mask.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const float v = image.pixels[i * image.channels + (image.channels == 3 ? c : 0)];
      rgba[i * 4 + c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
    rgba[i * 4 + 3] = image.mask[i] ? 255 : 0;
  }
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGBA;
  const auto name = path.string();
  if (!png_image_write_to_file(&png, name.c_str(), 0, rgba.data(), 0, nullptr)) {
    throw FormatError("cannot write PNG " + name + ": " + png.message);
  }
}

}  // namespace pavesat::dataset
