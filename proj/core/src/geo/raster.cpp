#include "pavesat/geo/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pavesat/error.hpp"

namespace pavesat::geo {
namespace {

// Pixel-space bounding window of the ring, clipped to [0, width) x [0, height).
struct IndexRange {
  int col0, row0, col1, row1;  // half-open
  bool empty() const { return col0 >= col1 || row0 >= row1; }
};

IndexRange ring_window(const AffineGeoTransform& t, std::span<const GeoPoint> ring, int width,
                       int height) {
  double cmin = std::numeric_limits<double>::infinity(), rmin = cmin;
  double cmax = -cmin, rmax = -cmin;
  for (const auto& p : ring) {
    const auto px = t.to_pixel(p);
    cmin = std::min(cmin, px.col);
    cmax = std::max(cmax, px.col);
    rmin = std::min(rmin, px.row);
    rmax = std::max(rmax, px.row);
  }
  auto clamp_i = [](double v, int lo, int hi) {
    return static_cast<int>(std::clamp(v, static_cast<double>(lo), static_cast<double>(hi)));
  };
  return {clamp_i(std::floor(cmin), 0, width), clamp_i(std::floor(rmin), 0, height),
          clamp_i(std::ceil(cmax), 0, width), clamp_i(std::ceil(rmax), 0, height)};
}

std::string describe(const SectionSpec& s) {
  std::ostringstream out;
  out << s.route_name << " [" << s.offset_from << ", " << s.offset_to << "]";
  return out.str();
}

}  // namespace

GeoRaster GeoRaster::blank(int width, int height, int bands, AffineGeoTransform transform,
                           std::string crs_id) {
  GeoRaster r;
  r.width = width;
  r.height = height;
  r.bands = bands;
  r.transform = transform;
  r.crs_id = std::move(crs_id);
  r.data.assign(static_cast<std::size_t>(width) * height * bands, 0);
  return r;
}

void GeoRaster::validate() const {
  if (width <= 0 || height <= 0 || bands <= 0) {
    throw ParameterError("raster '" + id + "' has empty dimensions");
  }
  if (data.size() != static_cast<std::size_t>(width) * height * bands) {
    throw ParameterError("raster '" + id + "' data length does not match width*height*bands");
  }
}

BoundingBox GeoRaster::extent() const {
  const std::vector<GeoPoint> corners = {
      transform.to_world({0, 0}),
      transform.to_world({static_cast<double>(width), 0}),
      transform.to_world({0, static_cast<double>(height)}),
      transform.to_world({static_cast<double>(width), static_cast<double>(height)})};
  return bounding_box(corners);
}

SectionImage crop_section(const GeoRaster& raster, const SectionPolygon& poly) {
  raster.validate();
  if (raster.crs_id != poly.crs_id) {
    throw CrsError("CRS mismatch: raster '" + raster.id + "' is '" + raster.crs_id +
                   "', section polygon is '" + poly.crs_id + "'");
  }
  if (poly.ring.size() < 4) throw GeometryError("section polygon ring has fewer than 3 vertices");

  const auto win = ring_window(raster.transform, poly.ring, raster.width, raster.height);
  if (win.empty()) {
    throw EmptyCropError("section " + describe(poly.source_spec) + " lies outside raster '" +
                         raster.id + "'");
  }

  const int ww = win.col1 - win.col0;
  const int wh = win.row1 - win.row0;
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(ww) * wh, 0);
  int c0 = win.col1, r0 = win.row1, c1 = win.col0 - 1, r1 = win.row0 - 1;
  for (int r = win.row0; r < win.row1; ++r) {
    for (int c = win.col0; c < win.col1; ++c) {
      if (point_in_ring(poly.ring, raster.transform.pixel_center(c, r))) {
        inside[static_cast<std::size_t>(r - win.row0) * ww + (c - win.col0)] = 1;
        c0 = std::min(c0, c);
        c1 = std::max(c1, c);
        r0 = std::min(r0, r);
        r1 = std::max(r1, r);
      }
    }
  }
  if (c1 < c0) {
    throw EmptyCropError("no pixel center of raster '" + raster.id + "' falls inside section " +
                         describe(poly.source_spec));
  }

  SectionImage img;
  img.width = c1 - c0 + 1;
  img.height = r1 - r0 + 1;
  img.bands = raster.bands;
  img.bounds = {c0, r0, img.width, img.height};
  img.raster_id = raster.id;
  img.crs_id = raster.crs_id;
  img.spec = poly.source_spec;
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height * img.bands, 0);
  img.mask.assign(static_cast<std::size_t>(img.width) * img.height, 0);
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (!inside[static_cast<std::size_t>(r - win.row0) * ww + (c - win.col0)]) continue;
      const auto o = static_cast<std::size_t>(r - r0) * img.width + (c - c0);
      img.mask[o] = 1;
      for (int b = 0; b < img.bands; ++b) img.pixels[o * img.bands + b] = raster.at(c, r, b);
    }
  }
  return img;
}

GeoRaster mosaic_lookup(std::span<const GeoRaster> tiles, const SectionPolygon& poly) {
  if (tiles.empty()) throw CoverageError("no raster tiles supplied for " + describe(poly.source_spec));
  const auto& ref = tiles.front();
  if (!ref.transform.is_north_up()) {
    throw ParameterError("mosaic requires north-up tiles; '" + ref.id + "' is rotated");
  }
  for (const auto& t : tiles) {
    t.validate();
    if (t.crs_id != ref.crs_id) {
      throw CrsError("tile '" + t.id + "' CRS '" + t.crs_id + "' differs from '" + ref.crs_id + "'");
    }
    if (t.bands != ref.bands || !t.transform.is_north_up() ||
        t.transform.pixel_width() != ref.transform.pixel_width() ||
        t.transform.pixel_height() != ref.transform.pixel_height()) {
      throw ParameterError("tile '" + t.id + "' does not share band count and pixel size with '" +
                           ref.id + "'");
    }
    const auto off = ref.transform.to_pixel({t.transform.origin_x(), t.transform.origin_y()});
    if (std::abs(off.col - std::round(off.col)) > 1e-6 ||
        std::abs(off.row - std::round(off.row)) > 1e-6) {
      throw ParameterError("tile '" + t.id + "' is not aligned to the pixel grid of '" + ref.id + "'");
    }
  }
  if (poly.crs_id != ref.crs_id) {
    throw CrsError("CRS mismatch: tiles are '" + ref.crs_id + "', section polygon is '" +
                   poly.crs_id + "'");
  }

  // Polygon bounds on the reference grid (unclipped).
  double cmin = std::numeric_limits<double>::infinity(), rmin = cmin, cmax = -cmin, rmax = -cmin;
  for (const auto& p : poly.ring) {
    const auto px = ref.transform.to_pixel(p);
    cmin = std::min(cmin, px.col);
    cmax = std::max(cmax, px.col);
    rmin = std::min(rmin, px.row);
    rmax = std::max(rmax, px.row);
  }
  const int col0 = static_cast<int>(std::floor(cmin));
  const int row0 = static_cast<int>(std::floor(rmin));
  const int width = std::max(1, static_cast<int>(std::ceil(cmax)) - col0);
  const int height = std::max(1, static_cast<int>(std::ceil(rmax)) - row0);

  GeoRaster out = GeoRaster::blank(width, height, ref.bands, ref.transform.shifted(col0, row0),
                                   ref.crs_id);
  out.id = "mosaic(" + ref.id + (tiles.size() > 1 ? ",..." : "") + ")";
  out.nodata = ref.nodata;

  std::vector<GeoPoint> missing;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const GeoPoint center = out.transform.pixel_center(c, r);
      bool covered = false;
      for (const auto& t : tiles) {
        const auto px = t.transform.to_pixel(center);
        const int tc = static_cast<int>(std::floor(px.col));
        const int tr = static_cast<int>(std::floor(px.row));
        if (tc < 0 || tr < 0 || tc >= t.width || tr >= t.height) continue;
        for (int b = 0; b < out.bands; ++b) out.at(c, r, b) = t.at(tc, tr, b);
        covered = true;
        break;
      }
      if (!covered && point_in_ring(poly.ring, center)) missing.push_back(center);
    }
  }
  if (!missing.empty()) {
    const auto box = bounding_box(missing);
    std::ostringstream msg;
    msg.precision(12);
    msg << "tiles do not cover section " << describe(poly.source_spec) << ": " << missing.size()
        << " pixel(s) missing in extent [" << box.min_x << ", " << box.min_y << "] - ["
        << box.max_x << ", " << box.max_y << "]";
    throw CoverageError(msg.str());
  }
  return out;
}

}  // namespace pavesat::geo
