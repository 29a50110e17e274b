#pragma once

#include <array>

#include "pavesat/geo/geometry.hpp"

namespace pavesat::geo {

/// Fractional pixel position; (0, 0) is the outer corner of the first
/// pixel, so pixel (c, r) has its center at (c + 0.5, r + 0.5).
struct PixelCoord {
  double col = 0.0;
  double row = 0.0;
};

/// Affine pixel <-> world mapping:
///   x = origin_x + col * pixel_width + row * row_rotation
///   y = origin_y + col * col_rotation + row * pixel_height
/// Singular transforms are rejected at construction.
class AffineGeoTransform {
 public:
  AffineGeoTransform() : AffineGeoTransform(0.0, 0.0, 1.0, 1.0) {}
  AffineGeoTransform(double origin_x, double origin_y, double pixel_width, double pixel_height,
                     double row_rotation = 0.0, double col_rotation = 0.0);

  /// GDAL ordering {origin_x, pixel_width, row_rotation, origin_y, col_rotation, pixel_height}.
  static AffineGeoTransform from_gdal(const std::array<double, 6>& gt);
  std::array<double, 6> to_gdal() const;

  PixelCoord to_pixel(GeoPoint p) const;
  GeoPoint to_world(PixelCoord px) const;
  GeoPoint pixel_center(int col, int row) const { return to_world({col + 0.5, row + 0.5}); }

  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  double pixel_width() const { return pixel_width_; }
  double pixel_height() const { return pixel_height_; }
  double row_rotation() const { return row_rotation_; }
  double col_rotation() const { return col_rotation_; }
  bool is_north_up() const { return row_rotation_ == 0.0 && col_rotation_ == 0.0; }

  /// Same transform with the origin moved to pixel (col, row).
  AffineGeoTransform shifted(int col, int row) const;

  friend bool operator==(const AffineGeoTransform&, const AffineGeoTransform&) = default;

 private:
  double origin_x_, origin_y_, pixel_width_, pixel_height_, row_rotation_, col_rotation_;
  // Inverse of the linear part.
  double inv_a_ = 0, inv_b_ = 0, inv_c_ = 0, inv_d_ = 0;
};

}  // namespace pavesat::geo
