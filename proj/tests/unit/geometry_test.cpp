#include <gtest/gtest.h>

#include <cmath>

#include "pavesat/error.hpp"
#include "pavesat/geo/geometry.hpp"
#include "pavesat/geo/projection.hpp"
#include "pavesat/random.hpp"

using namespace pavesat;
using namespace pavesat::geo;

namespace {

Centerline straight_mile() { return {"R1", {{0, 0}, {kFeetPerMile, 0}}, {0.0, 1.0}}; }

}  // namespace

TEST(Centerline, InterpolatesBetweenVertices) {
  Centerline line{"R2", {{0, 0}, {100, 0}, {100, 200}}, {10.0, 11.0, 13.0}};
  const auto a = interpolate_centerline(line, 10.5);
  EXPECT_DOUBLE_EQ(a.x, 50);
  EXPECT_DOUBLE_EQ(a.y, 0);
  const auto b = interpolate_centerline(line, 12.0);
  EXPECT_DOUBLE_EQ(b.x, 100);
  EXPECT_DOUBLE_EQ(b.y, 100);
  EXPECT_EQ(interpolate_centerline(line, 13.0), (GeoPoint{100, 200}));
}

TEST(Centerline, OutOfRangeNamesRouteAndBounds) {
  const auto line = straight_mile();
  try {
    interpolate_centerline(line, 1.5);
    FAIL();
  } catch (const RangeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("'R1'"), std::string::npos);
    EXPECT_NE(msg.find("[0, 1]"), std::string::npos);
  }
}

TEST(Centerline, ValidateRejectsBrokenLines) {
  EXPECT_THROW((Centerline{"x", {{0, 0}}, {0}}.validate()), GeometryError);
  EXPECT_THROW((Centerline{"x", {{0, 0}, {1, 1}}, {0}}.validate()), GeometryError);
  EXPECT_THROW((Centerline{"x", {{0, 0}, {1, 1}}, {1, 0}}.validate()), GeometryError);
  EXPECT_THROW((Centerline{"x", {{0, 0}, {NAN, 1}}, {0, 1}}.validate()), GeometryError);
}

TEST(Centerline, SubpathKeepsInnerVerticesAndDensifies) {
  Centerline line{"R", {{0, 0}, {10, 0}, {20, 0}}, {0, 1, 2}};
  const auto sub = centerline_subpath(line, 0.5, 1.5);
  ASSERT_EQ(sub.size(), 3u);
  EXPECT_EQ(sub[1], (GeoPoint{10, 0}));
  const auto dense = centerline_subpath(line, 0.0, 2.0, 2.5);
  EXPECT_EQ(dense.size(), 9u);
  for (std::size_t i = 1; i < dense.size(); ++i) EXPECT_NEAR(dense[i].x - dense[i - 1].x, 2.5, 1e-12);
}

TEST(SectionPolygon, HalfMileAt12FeetCovers63360SquareFeet) {
  const auto poly = section_polygon(straight_mile(), {"R1", 0.25, 0.75}, {12.0, 1.0, 0.0, "LOCAL"});
  EXPECT_EQ(poly.ring.front(), poly.ring.back());
  EXPECT_NEAR(signed_area(poly.ring), 63360.0, 1e-6);
  EXPECT_EQ(poly.crs_id, "LOCAL");
  EXPECT_EQ(poly.source_spec.route_name, "R1");
}

TEST(SectionPolygon, MeterCrsScalesTheHalfWidth) {
  Centerline line{"M", {{0, 0}, {kFeetPerMile * kMetersPerFoot, 0}}, {0.0, 1.0}};
  const auto poly = section_polygon(line, {"M", 0.0, 0.5}, {12.0, kMetersPerFoot, 0.0, "EPSG:32614"});
  EXPECT_NEAR(signed_area(poly.ring), 63360.0 * kMetersPerFoot * kMetersPerFoot, 1e-6);
}

TEST(SectionPolygon, RightAngleBendHasMiterInsideAndBevelOutside) {
  // Two 100 x 20 strips sharing a 10 x 10 square, plus the 50 sq ft bevel triangle.
  const std::vector<GeoPoint> path = {{0, 0}, {100, 0}, {100, 100}};
  const auto ring = buffer_path(path, 10.0);
  EXPECT_NEAR(signed_area(ring), 3950.0, 1e-9);
  EXPECT_TRUE(point_in_ring(ring, {105, 1}));
  EXPECT_FALSE(point_in_ring(ring, {109, -9}));
  EXPECT_FALSE(point_in_ring(ring, {80, 20}));
}

TEST(SectionPolygon, AreaMatchesLengthTimesWidthOnGentleCurves) {
  Centerline arc{"C", {}, {}};
  const double radius = 2000.0;
  double mp = 0;
  for (int i = 0; i <= 40; ++i) {
    const double t = i * 0.02;
    arc.vertices.push_back({radius * std::cos(t), radius * std::sin(t)});
    if (i > 0) mp += 2 * radius * std::sin(0.01) / kFeetPerMile;
    arc.milepoints.push_back(mp);
  }
  const auto poly = section_polygon(arc, {"C", 0.0, mp}, {12.0, 1.0, 0.0, ""});
  const double expected = mp * kFeetPerMile * 24.0;
  EXPECT_NEAR(signed_area(poly.ring) / expected, 1.0, 1e-3);
}

TEST(SectionPolygon, RejectsBadSpecs) {
  const auto line = straight_mile();
  EXPECT_THROW(section_polygon(line, {"R1", 0.5, 0.5}), GeometryError);
  EXPECT_THROW(section_polygon(line, {"R1", 0.6, 0.5}), ParameterError);
  EXPECT_THROW(section_polygon(line, {"R1", 0.1, 0.5}, {0.0, 1.0, 0.0, ""}), ParameterError);
  EXPECT_THROW(section_polygon(line, {"R1", 0.5, 1.5}), RangeError);
}

TEST(PointInRing, HalfOpenEdges) {
  const std::vector<GeoPoint> square = {{0, 0}, {10, 0}, {10, 10}, {0, 10}, {0, 0}};
  EXPECT_TRUE(point_in_ring(square, {5, 5}));
  EXPECT_FALSE(point_in_ring(square, {15, 5}));
  EXPECT_FALSE(point_in_ring(square, {-1, 5}));
  // Exactly one of two squares sharing an edge claims a point on it.
  const std::vector<GeoPoint> right = {{10, 0}, {20, 0}, {20, 10}, {10, 10}, {10, 0}};
  for (double y : {0.5, 3.0, 9.5}) {
    EXPECT_NE(point_in_ring(square, {10, y}), point_in_ring(right, {10, y}));
  }
}

TEST(Area, SignAndClosure) {
  const std::vector<GeoPoint> ccw = {{0, 0}, {4, 0}, {4, 3}, {0, 3}};
  EXPECT_DOUBLE_EQ(signed_area(ccw), 12.0);
  std::vector<GeoPoint> cw(ccw.rbegin(), ccw.rend());
  EXPECT_DOUBLE_EQ(signed_area(cw), -12.0);
  auto closed = ccw;
  closed.push_back(ccw.front());
  EXPECT_DOUBLE_EQ(signed_area(closed), 12.0);
  const auto box = bounding_box(ccw);
  EXPECT_DOUBLE_EQ(box.width(), 4);
  EXPECT_DOUBLE_EQ(box.height(), 3);
  EXPECT_TRUE(box.intersects({3, 2, 8, 8}));
  EXPECT_FALSE(box.intersects({5, 0, 8, 8}));
}

TEST(TransverseMercator, MatchesReferenceProjection) {
  // Reference coordinates computed with PROJ (+proj=tmerc +ellps=WGS84).
  struct Case {
    TransverseMercator tm;
    double lon, lat, x, y;
  };
  const TransverseMercator utm14{-99.0, 0.0, 0.9996, 500000.0, 0.0};
  const TransverseMercator local{-100.0, 31.16666666666667, 1.0, 1000000.0, 1000000.0};
  const std::vector<Case> cases = {
      {utm14, -99.0, 0.0, 500000.000000, 0.000000},
      {utm14, -95.4, 29.8, 848022.471071, 3302062.240169},
      {utm14, -97.5, 31.2, 642906.974182, 3452736.485011},
      {utm14, -101.9, 26.1, 209944.486601, 2889989.486870},
      {local, -95.36, 29.76, 1449020.290166, 853093.758174},
  };
  for (const auto& c : cases) {
    const auto p = c.tm.forward(c.lon, c.lat);
    EXPECT_NEAR(p.x, c.x, 1e-3) << c.lon << "," << c.lat;
    EXPECT_NEAR(p.y, c.y, 1e-3) << c.lon << "," << c.lat;
  }
}

TEST(Centerline, BentLineMatchesArcLengthWalk) {
  Centerline line{"L", {{0, 0}, {3000, 0}, {3000, 2280}}, {0.0, 0.568, 1.0}};
  // Walk the polyline in 1 ft steps, converting distance to milepoints leg by leg.
  GeoPoint walked{};
  double mp = 0.0;
  for (std::size_t leg = 0; leg + 1 < line.vertices.size() && mp < 0.8; ++leg) {
    const auto a = line.vertices[leg], b = line.vertices[leg + 1];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const double per_foot = (line.milepoints[leg + 1] - line.milepoints[leg]) / len;
    for (double s = 0; s <= len && mp < 0.8; s += 1.0) {
      walked = {a.x + (b.x - a.x) * s / len, a.y + (b.y - a.y) * s / len};
      mp = line.milepoints[leg] + s * per_foot;
    }
  }
  const auto p = interpolate_centerline(line, 0.8);
  EXPECT_DOUBLE_EQ(p.x, 3000.0);
  EXPECT_NEAR(p.x, walked.x, 1.0);
  EXPECT_NEAR(p.y, walked.y, 1.0);
  EXPECT_EQ(interpolate_centerline(line, 0.568), (GeoPoint{3000, 0}));
}

TEST(SectionPolygon, LShapedAreaAgreesWithMonteCarlo) {
  Centerline line{"L", {{0, 0}, {2640, 0}, {2640, 2640}}, {0.0, 0.5, 1.0}};
  const auto poly = section_polygon(line, {"L", 0.25, 0.75}, {12.0, 1.0, 0.0, ""});
  const double area = signed_area(poly.ring);
  const double wedge = 0.5 * 12.0 * 12.0;
  EXPECT_NEAR(area, 2640.0 * 24.0, wedge + 1e-6);

  const auto box = bounding_box(poly.ring);
  Rng rng(12);
  int hits = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    hits += point_in_ring(poly.ring, {rng.uniform(box.min_x, box.max_x), rng.uniform(box.min_y, box.max_y)});
  }
  const double estimate = box.width() * box.height() * hits / n;
  const double sigma = box.width() * box.height() * std::sqrt(0.25 / n);
  EXPECT_NEAR(estimate, area, 4 * sigma);
}
