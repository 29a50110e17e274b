#include "pavesat/geo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pavesat/error.hpp"

namespace pavesat::geo {
namespace {

GeoPoint lerp(GeoPoint a, GeoPoint b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

double distance(GeoPoint a, GeoPoint b) { return std::hypot(b.x - a.x, b.y - a.y); }

// Drops consecutive points closer than `eps`.
std::vector<GeoPoint> dedupe(std::span<const GeoPoint> path, double eps) {
  std::vector<GeoPoint> out;
  for (const auto& p : path) {
    if (out.empty() || distance(out.back(), p) > eps) out.push_back(p);
  }
  return out;
}

}  // namespace

bool BoundingBox::intersects(const BoundingBox& o) const {
  return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
}

void Centerline::validate() const {
  if (vertices.size() < 2) {
    throw GeometryError("centerline '" + route_id + "' needs at least 2 vertices, has " +
                        std::to_string(vertices.size()));
  }
  if (milepoints.size() != vertices.size()) {
    throw GeometryError("centerline '" + route_id + "': milepoint count does not match vertices");
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!std::isfinite(vertices[i].x) || !std::isfinite(vertices[i].y) ||
        !std::isfinite(milepoints[i])) {
      throw GeometryError("centerline '" + route_id + "': non-finite value at vertex " +
                          std::to_string(i));
    }
    if (i > 0 && milepoints[i] < milepoints[i - 1]) {
      throw GeometryError("centerline '" + route_id + "': milepoints decrease at vertex " +
                          std::to_string(i));
    }
  }
}

GeoPoint interpolate_centerline(const Centerline& line, double milepoint) {
  line.validate();
  const double lo = line.first_milepoint();
  const double hi = line.last_milepoint();
  if (!(milepoint >= lo && milepoint <= hi)) {
    std::ostringstream msg;
    msg << "milepoint " << milepoint << " outside route '" << line.route_id << "' range [" << lo
        << ", " << hi << "]";
    throw RangeError(msg.str());
  }
  const auto& m = line.milepoints;
  const auto it = std::upper_bound(m.begin(), m.end(), milepoint);
  const auto i = static_cast<std::size_t>(it - m.begin()) - 1;
  if (i + 1 >= m.size()) return line.vertices.back();
  const double span = m[i + 1] - m[i];
  const double t = span > 0.0 ? (milepoint - m[i]) / span : 0.0;
  return lerp(line.vertices[i], line.vertices[i + 1], t);
}

std::vector<GeoPoint> centerline_subpath(const Centerline& line, double from, double to,
                                         double densify_step) {
  std::vector<GeoPoint> raw;
  raw.push_back(interpolate_centerline(line, from));
  for (std::size_t i = 0; i < line.vertices.size(); ++i) {
    if (line.milepoints[i] > from && line.milepoints[i] < to) raw.push_back(line.vertices[i]);
  }
  raw.push_back(interpolate_centerline(line, to));
  if (densify_step <= 0.0) return raw;

  std::vector<GeoPoint> dense;
  dense.push_back(raw.front());
  for (std::size_t i = 1; i < raw.size(); ++i) {
    const double len = distance(raw[i - 1], raw[i]);
    const auto pieces = static_cast<int>(std::ceil(len / densify_step));
    for (int k = 1; k < pieces; ++k) {
      dense.push_back(lerp(raw[i - 1], raw[i], static_cast<double>(k) / pieces));
    }
    dense.push_back(raw[i]);
  }
  return dense;
}

std::vector<GeoPoint> buffer_path(std::span<const GeoPoint> input, double half_width) {
  if (!(half_width > 0.0)) {
    throw ParameterError("buffer half width must be > 0, got " + std::to_string(half_width));
  }
  const auto path = dedupe(input, 1e-9 * std::max(1.0, half_width));
  if (path.size() < 2) throw GeometryError("cannot buffer a zero-length path");

  const std::size_t nseg = path.size() - 1;
  std::vector<GeoPoint> dir(nseg), normal(nseg);
  for (std::size_t i = 0; i < nseg; ++i) {
    const double len = distance(path[i], path[i + 1]);
    dir[i] = {(path[i + 1].x - path[i].x) / len, (path[i + 1].y - path[i].y) / len};
    normal[i] = {-dir[i].y, dir[i].x};  // left of travel
  }

  // side = +1 walks the left offset, -1 the right offset.
  auto offset_side = [&](double side) {
    std::vector<GeoPoint> pts;
    const double w = side * half_width;
    pts.push_back({path[0].x + w * normal[0].x, path[0].y + w * normal[0].y});
    for (std::size_t i = 1; i < nseg; ++i) {
      const auto& n0 = normal[i - 1];
      const auto& n1 = normal[i];
      const auto& v = path[i];
      const double cross = dir[i - 1].x * dir[i].y - dir[i - 1].y * dir[i].x;
      const double dot = n0.x * n1.x + n0.y * n1.y;
      if (std::abs(cross) < 1e-12) {
        pts.push_back({v.x + w * n1.x, v.y + w * n1.y});
      } else if (side * cross > 0.0 && dot > -0.9) {
        // Inside of the bend: the offset lines meet at the miter point.
        const double s = w / (1.0 + dot);
        pts.push_back({v.x + s * (n0.x + n1.x), v.y + s * (n0.y + n1.y)});
      } else {
        // Outside of the bend (or a hairpin): bevel.
        pts.push_back({v.x + w * n0.x, v.y + w * n0.y});
        pts.push_back({v.x + w * n1.x, v.y + w * n1.y});
      }
    }
    const auto& last = path.back();
    pts.push_back({last.x + w * normal.back().x, last.y + w * normal.back().y});
    return pts;
  };

  auto right = offset_side(-1.0);
  auto left = offset_side(+1.0);
  std::vector<GeoPoint> ring = std::move(right);
  ring.insert(ring.end(), left.rbegin(), left.rend());
  ring.push_back(ring.front());
  return ring;
}

SectionPolygon section_polygon(const Centerline& line, const SectionSpec& spec,
                               const BufferOptions& options) {
  if (!(options.half_width_ft > 0.0)) {
    throw ParameterError("half_width must be > 0 ft, got " + std::to_string(options.half_width_ft));
  }
  if (spec.offset_from > spec.offset_to) {
    std::ostringstream msg;
    msg << "section on '" << spec.route_name << "' has offset_from " << spec.offset_from
        << " > offset_to " << spec.offset_to;
    throw ParameterError(msg.str());
  }
  if (spec.offset_from == spec.offset_to) {
    throw GeometryError("zero-length section on '" + spec.route_name + "' at milepoint " +
                        std::to_string(spec.offset_from));
  }
  const auto path = centerline_subpath(line, spec.offset_from, spec.offset_to, options.densify_step);
  SectionPolygon poly;
  poly.ring = buffer_path(path, options.half_width_ft * options.units_per_foot);
  poly.source_spec = spec;
  poly.half_width_ft = options.half_width_ft;
  poly.crs_id = options.crs_id;
  return poly;
}

double signed_area(std::span<const GeoPoint> ring) {
  if (ring.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto& a = ring[i];
    const auto& b = ring[(i + 1) % ring.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

bool point_in_ring(std::span<const GeoPoint> ring, GeoPoint p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = ring[i];
    const auto& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

BoundingBox bounding_box(std::span<const GeoPoint> points) {
  BoundingBox box{points.front().x, points.front().y, points.front().x, points.front().y};
  for (const auto& p : points) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  return box;
}

}  // namespace pavesat::geo
