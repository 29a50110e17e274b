#include <gtest/gtest.h>

#include <cmath>

#include "pavesat/dataset/image.hpp"
#include "pavesat/error.hpp"
#include "pavesat/geo/io.hpp"
#include "pavesat/geo/raster.hpp"
#include "test_support.hpp"

using namespace pavesat;
using namespace pavesat::geo;

namespace {

GeoRaster painted(int w, int h, int bands, AffineGeoTransform t, std::string crs = "EPSG:2277") {
  auto r = GeoRaster::blank(w, h, bands, t, std::move(crs));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int b = 0; b < bands; ++b) r.at(x, y, b) = static_cast<std::uint8_t>(1 + (x * 5 + y * 11 + b * 17) % 254);
    }
  }
  return r;
}

SectionPolygon square_poly(double x0, double y0, double x1, double y1, std::string crs = "EPSG:2277") {
  SectionPolygon p;
  p.ring = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
  p.source_spec = {"R", 0.0, 0.1};
  p.crs_id = std::move(crs);
  return p;
}

}  // namespace

TEST(AffineGeoTransform, PixelWorldRoundTrip) {
  const AffineGeoTransform t(1000.0, 5000.0, 0.5, -0.5, 0.1, -0.05);
  for (double c : {0.0, 3.25, 100.5}) {
    for (double r : {0.0, 7.75, 40.0}) {
      const auto px = t.to_pixel(t.to_world({c, r}));
      EXPECT_NEAR(px.col, c, 1e-9);
      EXPECT_NEAR(px.row, r, 1e-9);
    }
  }
  const auto center = t.pixel_center(2, 3);
  EXPECT_DOUBLE_EQ(center.x, 1000.0 + 2.5 * 0.5 + 3.5 * 0.1);
  EXPECT_DOUBLE_EQ(center.y, 5000.0 + 2.5 * -0.05 + 3.5 * -0.5);
}

TEST(AffineGeoTransform, HandInvertedExample) {
  const AffineGeoTransform t(100, 200, 0.5, -0.5);
  const auto px = t.to_pixel({101, 199});
  EXPECT_DOUBLE_EQ(px.col, 2.0);
  EXPECT_DOUBLE_EQ(px.row, 2.0);
  const AffineGeoTransform identity(0, 0, 1, 1);
  EXPECT_DOUBLE_EQ(identity.to_pixel({7.5, 3.25}).col, 7.5);
  EXPECT_DOUBLE_EQ(identity.to_pixel({7.5, 3.25}).row, 3.25);
}

TEST(AffineGeoTransform, RandomRoundTrips) {
  Rng rng(8);
  const AffineGeoTransform t(3.1e6, 1.38e7, 0.5, -0.5, 0.02, 0.01);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const GeoPoint p{3.1e6 + rng.uniform(0, 5000), 1.38e7 - rng.uniform(0, 5000)};
    const auto q = t.to_world(t.to_pixel(p));
    worst = std::max({worst, std::abs(q.x - p.x) / std::abs(p.x), std::abs(q.y - p.y) / std::abs(p.y)});
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(AffineGeoTransform, GdalOrderingAndShift) {
  const std::array<double, 6> gt = {10, 2, 0, 20, 0, -2};
  const auto t = AffineGeoTransform::from_gdal(gt);
  EXPECT_EQ(t.to_gdal(), gt);
  EXPECT_TRUE(t.is_north_up());
  const auto s = t.shifted(3, 4);
  EXPECT_DOUBLE_EQ(s.origin_x(), 16);
  EXPECT_DOUBLE_EQ(s.origin_y(), 12);
  EXPECT_THROW(AffineGeoTransform(0, 0, 1, 0), ParameterError);
  EXPECT_THROW(AffineGeoTransform(0, 0, 1, 1, 1, 1), ParameterError);
}

TEST(CropSection, MaskMatchesPixelCenterOracleUnderRotation) {
  const double a = 0.3;
  const AffineGeoTransform t(50, 200, std::cos(a), -std::cos(a), std::sin(a), std::sin(a));
  const auto raster = painted(120, 120, 3, t);
  SectionPolygon poly;
  poly.ring = {{60, 120}, {140, 110}, {150, 150}, {100, 170}, {70, 150}, {60, 120}};
  poly.crs_id = raster.crs_id;
  const auto crop = crop_section(raster, poly);
  int inside_total = 0;
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      // Convex polygon: inside iff left of every counterclockwise edge.
      const auto p = t.pixel_center(c, r);
      bool inside = true;
      for (std::size_t i = 0; i + 1 < poly.ring.size(); ++i) {
        const auto u = poly.ring[i], v = poly.ring[i + 1];
        inside = inside && (v.x - u.x) * (p.y - u.y) - (v.y - u.y) * (p.x - u.x) > 0;
      }
      inside_total += inside;
      const int lc = c - crop.bounds.col, lr = r - crop.bounds.row;
      if (lc < 0 || lr < 0 || lc >= crop.width || lr >= crop.height) {
        EXPECT_FALSE(inside) << c << "," << r;
        continue;
      }
      const auto idx = static_cast<std::size_t>(lr) * crop.width + lc;
      ASSERT_EQ(crop.mask[idx] != 0, inside) << c << "," << r;
      for (int b = 0; b < 3; ++b) EXPECT_EQ(crop.pixels[idx * 3 + b], inside ? raster.at(c, r, b) : 0);
    }
  }
  EXPECT_GT(inside_total, 500);
}

TEST(CropSection, WindowIsMinimal) {
  const auto raster = painted(20, 20, 1, AffineGeoTransform(0, 20, 1, -1));
  const auto crop = crop_section(raster, square_poly(4.2, 10.2, 8.8, 13.8));
  // Centers x in {4.5..8.5}, y in {10.5..13.5}: columns 4..8, rows 6..9.
  EXPECT_EQ(crop.bounds, (PixelWindow{4, 6, 5, 4}));
  EXPECT_TRUE(std::all_of(crop.mask.begin(), crop.mask.end(), [](auto m) { return m == 1; }));
}

TEST(CropSection, FullCoverAndPaintedRectangle) {
  auto raster = painted(16, 12, 3, AffineGeoTransform(0, 12, 1, -1));
  const auto full = crop_section(raster, square_poly(-1, -1, 17, 13));
  EXPECT_EQ(full.bounds, (PixelWindow{0, 0, 16, 12}));
  EXPECT_EQ(full.pixels, raster.data);
  EXPECT_TRUE(std::all_of(full.mask.begin(), full.mask.end(), [](auto m) { return m == 1; }));

  for (int r = 3; r < 8; ++r) {
    for (int c = 5; c < 11; ++c) {
      for (int b = 0; b < 3; ++b) raster.at(c, r, b) = 200;
    }
  }
  // Rows 3..7 span y in [4, 9]; columns 5..10 span x in [5, 11].
  const auto crop = crop_section(raster, square_poly(5, 4, 11, 9));
  for (std::size_t i = 0; i < crop.mask.size(); ++i) {
    if (crop.mask[i]) EXPECT_EQ(crop.pixels[i * 3], 200);
  }
  EXPECT_EQ(crop.bounds, (PixelWindow{5, 3, 6, 5}));
}

TEST(CropSection, Errors) {
  const auto raster = painted(10, 10, 3, AffineGeoTransform(0, 10, 1, -1));
  EXPECT_THROW(crop_section(raster, square_poly(1, 1, 5, 5, "EPSG:32614")), CrsError);
  EXPECT_THROW(crop_section(raster, square_poly(20, 20, 30, 30)), EmptyCropError);
  // Inside the extent but between pixel centers.
  EXPECT_THROW(crop_section(raster, square_poly(2.6, 2.6, 2.9, 2.9)), EmptyCropError);
}

TEST(Mosaic, StitchesAdjacentTilesAndReportsGaps) {
  const auto whole = painted(40, 20, 3, AffineGeoTransform(100, 50, 1, -1));
  auto left = GeoRaster::blank(20, 20, 3, AffineGeoTransform(100, 50, 1, -1), whole.crs_id);
  auto right = GeoRaster::blank(20, 20, 3, AffineGeoTransform(120, 50, 1, -1), whole.crs_id);
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 40; ++x) {
      for (int b = 0; b < 3; ++b) (x < 20 ? left.at(x, y, b) : right.at(x - 20, y, b)) = whole.at(x, y, b);
    }
  }
  left.id = "left.tif";
  right.id = "right.tif";
  const auto poly = square_poly(112, 35, 131, 45, whole.crs_id);
  const std::vector<GeoRaster> tiles = {left, right};
  const auto mosaic = mosaic_lookup(tiles, poly);
  const auto from_mosaic = crop_section(mosaic, poly);
  const auto from_whole = crop_section(whole, poly);
  EXPECT_EQ(from_mosaic.pixels, from_whole.pixels);
  EXPECT_EQ(from_mosaic.mask, from_whole.mask);

  const std::vector<GeoRaster> only_left = {left};
  try {
    mosaic_lookup(only_left, poly);
    FAIL();
  } catch (const CoverageError& e) {
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
  }

  auto shifted = right;
  shifted.transform = AffineGeoTransform(120.5, 50, 1, -1);
  const std::vector<GeoRaster> misaligned = {left, shifted};
  EXPECT_THROW(mosaic_lookup(misaligned, poly), ParameterError);
  auto other_crs = right;
  other_crs.crs_id = "EPSG:4326";
  const std::vector<GeoRaster> mixed = {left, other_crs};
  EXPECT_THROW(mosaic_lookup(mixed, poly), CrsError);
}

TEST(GeoIo, CropPngAndSidecarRoundTrip) {
  testutil::TempDir dir;
  const auto raster = painted(30, 30, 3, AffineGeoTransform(0, 30, 1, -1));
  SectionPolygon poly;
  poly.ring = {{3, 3}, {25, 6}, {12, 24}, {3, 3}};
  poly.crs_id = raster.crs_id;
  const auto crop = crop_section(raster, poly);
  write_section_crop(dir / "c.png", crop);
  const auto img = dataset::read_image_png(dir / "c.png");
  ASSERT_EQ(img.width, crop.width);
  ASSERT_EQ(img.height, crop.height);
  EXPECT_EQ(img.mask, crop.mask);
  for (std::size_t i = 0; i < crop.pixels.size(); ++i) EXPECT_EQ(img.pixels[i], crop.pixels[i]);

  const CropSidecar side{"FM 1960", 12.0, 12.5, crop.bounds, "EPSG:2277"};
  write_sidecar(dir / "c.json", side);
  const auto back = read_sidecar(dir / "c.json");
  EXPECT_EQ(back.route_name, side.route_name);
  EXPECT_EQ(back.offset_to, 12.5);
  EXPECT_EQ(back.pixel_window, crop.bounds);
  EXPECT_EQ(back.crs_id, "EPSG:2277");
  testutil::write_file(dir / "bad.json", "{\"route_name\": 3");
  EXPECT_THROW(read_sidecar(dir / "bad.json"), FormatError);
}

TEST(GeoIo, CenterlinesAndSections) {
  testutil::TempDir dir;
  testutil::write_file(dir / "lines.csv",
                      "route_id,milepoint,x,y\nA,0,0,0\nB,5,10,10\nA,1,5280,0\nB,6,10,5290\n");
  const auto lines = read_centerlines(dir / "lines.csv");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines.at("B").milepoints, (std::vector<double>{5, 6}));
  testutil::write_file(dir / "bad.csv", "route_id,milepoint,x,y\nA,1,0,0\nA,0,1,1\n");
  EXPECT_THROW(read_centerlines(dir / "bad.csv"), GeometryError);

  testutil::write_file(dir / "ll.csv", "route_id,milepoint,x,y\nL,0,-99,30\nL,1,-99,30.01\n");
  const auto projected = read_centerlines(dir / "ll.csv", TransverseMercator{-99.0});
  EXPECT_NEAR(projected.at("L").vertices[0].x, 500000.0, 1e-6);
  EXPECT_GT(projected.at("L").vertices[1].y, projected.at("L").vertices[0].y);

  testutil::write_file(dir / "sections.csv", "route_name,offset_from,offset_to\n\"FM 1960\",12,12.5\n");
  const auto sections = read_sections(dir / "sections.csv");
  ASSERT_EQ(sections.size(), 1u);
  EXPECT_EQ(sections[0].route_name, "FM 1960");
  EXPECT_DOUBLE_EQ(sections[0].offset_to, 12.5);
}
