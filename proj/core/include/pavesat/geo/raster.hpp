#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pavesat/geo/geometry.hpp"
#include "pavesat/geo/transform.hpp"

namespace pavesat::geo {

/// 8-bit georeferenced raster with pixel-interleaved samples:
/// data[(row * width + col) * bands + band].
struct GeoRaster {
  int width = 0;
  int height = 0;
  int bands = 0;
  AffineGeoTransform transform;
  std::string crs_id;
  std::vector<std::uint8_t> data;
  std::optional<double> nodata;
  std::string id;  // usually the source file name

  static GeoRaster blank(int width, int height, int bands, AffineGeoTransform transform,
                         std::string crs_id = {});

  void validate() const;

  std::uint8_t at(int col, int row, int band) const {
    return data[(static_cast<std::size_t>(row) * width + col) * bands + band];
  }
  std::uint8_t& at(int col, int row, int band) {
    return data[(static_cast<std::size_t>(row) * width + col) * bands + band];
  }

  /// World-space extent of the pixel grid.
  BoundingBox extent() const;
};

struct PixelWindow {
  int col = 0;
  int row = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const PixelWindow&, const PixelWindow&) = default;
};

/// Crop of one section: pixels outside the polygon are 0 with mask 0.
struct SectionImage {
  int width = 0;
  int height = 0;
  int bands = 0;
  std::vector<std::uint8_t> pixels;  // interleaved like GeoRaster
  std::vector<std::uint8_t> mask;    // 1 inside the polygon
  PixelWindow bounds;
  std::string raster_id;
  std::string crs_id;
  SectionSpec spec;
};

/// Minimal pixel window holding every pixel whose center lies inside the
/// polygon. Inside pixels are copied verbatim, the rest are zero/masked.
/// Throws CrsError on CRS mismatch and EmptyCropError when no pixel
/// center falls inside the polygon.
SectionImage crop_section(const GeoRaster& raster, const SectionPolygon& poly);

/// Assembles a raster on the first tile's pixel grid covering the
/// polygon's bounding box. Overlaps resolve to the first listed tile.
/// Throws CoverageError when a pixel center inside the polygon is not
/// covered by any tile.
GeoRaster mosaic_lookup(std::span<const GeoRaster> tiles, const SectionPolygon& poly);

}  // namespace pavesat::geo
