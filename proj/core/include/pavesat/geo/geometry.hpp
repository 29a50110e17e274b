#pragma once

#include <span>
#include <string>
#include <vector>

namespace pavesat::geo {

inline constexpr double kFeetPerMile = 5280.0;
inline constexpr double kMetersPerFoot = 0.3048;

/// Projected coordinate. Units follow the dataset CRS (feet or meters).
struct GeoPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Route centerline with a cumulative milepoint per vertex.
struct Centerline {
  std::string route_id;
  std::vector<GeoPoint> vertices;
  std::vector<double> milepoints;

  /// Throws GeometryError when the invariants (>= 2 vertices, one
  /// milepoint per vertex, nondecreasing milepoints, finite coordinates)
  /// do not hold.
  void validate() const;

  double first_milepoint() const { return milepoints.front(); }
  double last_milepoint() const { return milepoints.back(); }
};

/// A PMIS section: ROUTE NAME, OFFSET FROM, OFFSET TO (miles).
struct SectionSpec {
  std::string route_name;
  double offset_from = 0.0;
  double offset_to = 0.0;
};

/// Closed counterclockwise ring (first == last) outlining a lane section.
struct SectionPolygon {
  std::vector<GeoPoint> ring;
  SectionSpec source_spec;
  double half_width_ft = 12.0;
  std::string crs_id;
};

struct BoundingBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool intersects(const BoundingBox& other) const;
};

struct BufferOptions {
  double half_width_ft = 12.0;
  /// World units per foot: 1 for foot-based CRS, 0.3048 for meters.
  double units_per_foot = 1.0;
  /// Optional densification step along the centerline in world units; 0
  /// keeps only the source vertices and the interpolated section ends.
  double densify_step = 0.0;
  std::string crs_id;
};

/// Linear interpolation between the vertices bracketing `milepoint`.
/// Throws RangeError naming the route and its milepoint bounds.
GeoPoint interpolate_centerline(const Centerline& line, double milepoint);

/// Centerline vertices strictly inside (from, to) plus the interpolated
/// ends, optionally densified.
std::vector<GeoPoint> centerline_subpath(const Centerline& line, double from, double to,
                                         double densify_step = 0.0);

/// Lane-coverage polygon: perpendicular offsets at +/- half width along
/// the section, flat end caps, bevel joins on the outside of bends and a
/// miter point on the inside.
SectionPolygon section_polygon(const Centerline& line, const SectionSpec& spec,
                               const BufferOptions& options = {});

/// Buffers an explicit path; used by section_polygon.
std::vector<GeoPoint> buffer_path(std::span<const GeoPoint> path, double half_width);

/// Shoelace area; positive for counterclockwise rings. Accepts closed or open rings.
double signed_area(std::span<const GeoPoint> ring);

/// Even-odd crossing test with the half-open edge rule.
bool point_in_ring(std::span<const GeoPoint> ring, GeoPoint p);

BoundingBox bounding_box(std::span<const GeoPoint> points);

}  // namespace pavesat::geo
