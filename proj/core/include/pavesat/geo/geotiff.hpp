#pragma once

#include <filesystem>

#include "pavesat/geo/raster.hpp"

namespace pavesat::geo {

enum class TiffCompression { None, Deflate };

struct GeoTiffWriteOptions {
  TiffCompression compression = TiffCompression::None;
  bool tiled = false;
  int tile_size = 256;  // multiple of 16
};

/// Reads the supported GeoTIFF subset: 8-bit, 1 or 3 samples per pixel,
/// uncompressed or deflate, stripped or tiled. The geotransform comes
/// from ModelTransformationTag or ModelPixelScale + ModelTiepoint; the
/// CRS id ("EPSG:<code>") from the GeoKey directory when present.
GeoRaster read_geotiff(const std::filesystem::path& path);

void write_geotiff(const std::filesystem::path& path, const GeoRaster& raster,
                   const GeoTiffWriteOptions& options = {});

}  // namespace pavesat::geo
