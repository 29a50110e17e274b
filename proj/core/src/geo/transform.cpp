#include "pavesat/geo/transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pavesat/error.hpp"

namespace pavesat::geo {

AffineGeoTransform::AffineGeoTransform(double origin_x, double origin_y, double pixel_width,
                                       double pixel_height, double row_rotation,
                                       double col_rotation)
    : origin_x_(origin_x),
      origin_y_(origin_y),
      pixel_width_(pixel_width),
      pixel_height_(pixel_height),
      row_rotation_(row_rotation),
      col_rotation_(col_rotation) {
  const double det = pixel_width_ * pixel_height_ - row_rotation_ * col_rotation_;
  const double scale = std::max({std::abs(pixel_width_), std::abs(pixel_height_),
                                 std::abs(row_rotation_), std::abs(col_rotation_)});
  if (!std::isfinite(det) || !(scale > 0.0) || std::abs(det) <= 1e-12 * scale * scale) {
    std::ostringstream msg;
    msg << "singular geotransform (pixel_width=" << pixel_width_ << ", pixel_height="
        << pixel_height_ << ", row_rotation=" << row_rotation_
        << ", col_rotation=" << col_rotation_ << ")";
    throw ParameterError(msg.str());
  }
  inv_a_ = pixel_height_ / det;
  inv_b_ = -row_rotation_ / det;
  inv_c_ = -col_rotation_ / det;
  inv_d_ = pixel_width_ / det;
}

AffineGeoTransform AffineGeoTransform::from_gdal(const std::array<double, 6>& gt) {
  return AffineGeoTransform(gt[0], gt[3], gt[1], gt[5], gt[2], gt[4]);
}

std::array<double, 6> AffineGeoTransform::to_gdal() const {
  return {origin_x_, pixel_width_, row_rotation_, origin_y_, col_rotation_, pixel_height_};
}

PixelCoord AffineGeoTransform::to_pixel(GeoPoint p) const {
  const double dx = p.x - origin_x_;
  const double dy = p.y - origin_y_;
  return {inv_a_ * dx + inv_b_ * dy, inv_c_ * dx + inv_d_ * dy};
}

GeoPoint AffineGeoTransform::to_world(PixelCoord px) const {
  return {origin_x_ + px.col * pixel_width_ + px.row * row_rotation_,
          origin_y_ + px.col * col_rotation_ + px.row * pixel_height_};
}

AffineGeoTransform AffineGeoTransform::shifted(int col, int row) const {
  const auto o = to_world({static_cast<double>(col), static_cast<double>(row)});
  return AffineGeoTransform(o.x, o.y, pixel_width_, pixel_height_, row_rotation_, col_rotation_);
}

}  // namespace pavesat::geo
