#include <gtest/gtest.h>

#include "pavesat/error.hpp"
#include "pavesat/geo/geotiff.hpp"
#include "test_support.hpp"

using namespace pavesat;
using namespace pavesat::geo;

namespace {

GeoRaster sample_raster(int w, int h, int bands, AffineGeoTransform t) {
  auto r = GeoRaster::blank(w, h, bands, t, "EPSG:2277");
  Rng rng(static_cast<std::uint64_t>(w * 1000 + h * 10 + bands));
  for (auto& v : r.data) v = static_cast<std::uint8_t>(rng.below(256));
  return r;
}

struct Layout {
  TiffCompression compression;
  bool tiled;
  int bands;
};

}  // namespace

class GeoTiffRoundTrip : public ::testing::TestWithParam<Layout> {};

TEST_P(GeoTiffRoundTrip, PixelsTransformAndCrsSurvive) {
  const auto layout = GetParam();
  pavesat::testutil::TempDir dir;
  // Sizes that are not tile multiples exercise partial edge tiles.
  auto raster = sample_raster(45, 37, layout.bands, AffineGeoTransform(3100000.5, 13800000.25, 1.64, -1.64));
  raster.nodata = 0.0;
  GeoTiffWriteOptions opt;
  opt.compression = layout.compression;
  opt.tiled = layout.tiled;
  opt.tile_size = 16;
  write_geotiff(dir / "r.tif", raster, opt);
  const auto back = read_geotiff(dir / "r.tif");
  EXPECT_EQ(back.width, raster.width);
  EXPECT_EQ(back.height, raster.height);
  EXPECT_EQ(back.bands, raster.bands);
  EXPECT_EQ(back.data, raster.data);
  EXPECT_EQ(back.transform, raster.transform);
  EXPECT_EQ(back.crs_id, "EPSG:2277");
  ASSERT_TRUE(back.nodata.has_value());
  EXPECT_EQ(*back.nodata, 0.0);
}

INSTANTIATE_TEST_SUITE_P(Layouts, GeoTiffRoundTrip,
                         ::testing::Values(Layout{TiffCompression::None, false, 3},
                                           Layout{TiffCompression::Deflate, false, 3},
                                           Layout{TiffCompression::None, true, 3},
                                           Layout{TiffCompression::Deflate, true, 1},
                                           Layout{TiffCompression::None, false, 1}));

TEST(GeoTiff, RotatedTransformUsesFullMatrix) {
  pavesat::testutil::TempDir dir;
  const auto raster = sample_raster(8, 6, 3, AffineGeoTransform(10, 20, 0.5, -0.5, 0.1, 0.2));
  write_geotiff(dir / "rot.tif", raster);
  const auto back = read_geotiff(dir / "rot.tif");
  EXPECT_EQ(back.transform, raster.transform);
  EXPECT_FALSE(back.transform.is_north_up());
}

TEST(GeoTiff, RejectsMissingAndForeignFiles) {
  pavesat::testutil::TempDir dir;
  EXPECT_THROW(read_geotiff(dir / "absent.tif"), FormatError);
  pavesat::testutil::write_file(dir / "text.tif", "not a tiff at all");
  EXPECT_THROW(read_geotiff(dir / "text.tif"), FormatError);
}
