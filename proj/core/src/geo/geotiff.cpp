#include "pavesat/geo/geotiff.hpp"

#include <tiffio.h>

#include <array>
#include <cstring>
#include <memory>
#include <mutex>
#include <vector>

#include "pavesat/error.hpp"

namespace pavesat::geo {
namespace {

constexpr ttag_t kModelPixelScale = 33550;
constexpr ttag_t kModelTiepoint = 33922;
constexpr ttag_t kModelTransformation = 34264;
constexpr ttag_t kGeoKeyDirectory = 34735;
constexpr ttag_t kGdalNodata = 42113;

constexpr std::uint16_t kGTModelTypeGeoKey = 1024;
constexpr std::uint16_t kGTRasterTypeGeoKey = 1025;
constexpr std::uint16_t kGeographicTypeGeoKey = 2048;
constexpr std::uint16_t kProjectedCSTypeGeoKey = 3072;
constexpr std::uint16_t kRasterPixelIsPoint = 2;
constexpr std::uint16_t kUserDefined = 32767;

const TIFFFieldInfo kGeoFields[] = {
    {kModelPixelScale, -1, -1, TIFF_DOUBLE, FIELD_CUSTOM, 1, 1, const_cast<char*>("ModelPixelScale")},
    {kModelTiepoint, -1, -1, TIFF_DOUBLE, FIELD_CUSTOM, 1, 1, const_cast<char*>("ModelTiepoint")},
    {kModelTransformation, -1, -1, TIFF_DOUBLE, FIELD_CUSTOM, 1, 1,
     const_cast<char*>("ModelTransformation")},
    {kGeoKeyDirectory, -1, -1, TIFF_SHORT, FIELD_CUSTOM, 1, 1, const_cast<char*>("GeoKeyDirectory")},
    {kGdalNodata, -1, -1, TIFF_ASCII, FIELD_CUSTOM, 1, 0, const_cast<char*>("GDALNoData")},
};

TIFFExtendProc g_parent_extender = nullptr;

void geotiff_extender(TIFF* tif) {
  TIFFMergeFieldInfo(tif, kGeoFields, sizeof(kGeoFields) / sizeof(kGeoFields[0]));
  if (g_parent_extender) g_parent_extender(tif);
}

void register_geotiff_tags() {
  static std::once_flag once;
  std::call_once(once, [] { g_parent_extender = TIFFSetTagExtender(geotiff_extender); });
}

struct TiffCloser {
  void operator()(TIFF* t) const { TIFFClose(t); }
};
using TiffHandle = std::unique_ptr<TIFF, TiffCloser>;

template <class T>
std::vector<T> get_array(TIFF* tif, ttag_t tag) {
  std::uint16_t count = 0;
  T* values = nullptr;
  if (TIFFGetField(tif, tag, &count, &values) != 1 || values == nullptr) return {};
  return std::vector<T>(values, values + count);
}

std::string crs_from_geokeys(const std::vector<std::uint16_t>& keys, std::uint16_t& raster_type) {
  raster_type = 1;
  if (keys.size() < 4) return {};
  const std::size_t n = keys[3];
  std::uint16_t projected = 0, geographic = 0;
  for (std::size_t k = 0; k < n && 4 + 4 * k + 3 < keys.size(); ++k) {
    const auto* e = &keys[4 + 4 * k];
    if (e[1] != 0) continue;  // value stored elsewhere; not needed here
    if (e[0] == kProjectedCSTypeGeoKey) projected = e[3];
    if (e[0] == kGeographicTypeGeoKey) geographic = e[3];
    if (e[0] == kGTRasterTypeGeoKey) raster_type = e[3];
  }
  if (projected && projected != kUserDefined) return "EPSG:" + std::to_string(projected);
  if (geographic && geographic != kUserDefined) return "EPSG:" + std::to_string(geographic);
  return {};
}

void read_pixels(TIFF* tif, GeoRaster& r, const std::string& name) {
  std::uint16_t planar = PLANARCONFIG_CONTIG;
  TIFFGetFieldDefaulted(tif, TIFFTAG_PLANARCONFIG, &planar);
  const bool separate = planar == PLANARCONFIG_SEPARATE && r.bands > 1;
  const int planes = separate ? r.bands : 1;
  const int spp = separate ? 1 : r.bands;

  if (TIFFIsTiled(tif)) {
    std::uint32_t tw = 0, th = 0;
    TIFFGetField(tif, TIFFTAG_TILEWIDTH, &tw);
    TIFFGetField(tif, TIFFTAG_TILELENGTH, &th);
    std::vector<std::uint8_t> buf(TIFFTileSize(tif));
    for (int plane = 0; plane < planes; ++plane) {
      for (std::uint32_t y0 = 0; y0 < static_cast<std::uint32_t>(r.height); y0 += th) {
        for (std::uint32_t x0 = 0; x0 < static_cast<std::uint32_t>(r.width); x0 += tw) {
          const auto tile = TIFFComputeTile(tif, x0, y0, 0, static_cast<std::uint16_t>(plane));
          if (TIFFReadEncodedTile(tif, tile, buf.data(), static_cast<tmsize_t>(buf.size())) < 0) {
            throw FormatError(name + ": failed to decode tile " + std::to_string(tile));
          }
          for (std::uint32_t y = 0; y < th && y0 + y < static_cast<std::uint32_t>(r.height); ++y) {
            for (std::uint32_t x = 0; x < tw && x0 + x < static_cast<std::uint32_t>(r.width); ++x) {
              for (int s = 0; s < spp; ++s) {
                r.at(static_cast<int>(x0 + x), static_cast<int>(y0 + y), separate ? plane : s) =
                    buf[(static_cast<std::size_t>(y) * tw + x) * spp + s];
              }
            }
          }
        }
      }
    }
    return;
  }

  std::vector<std::uint8_t> line(TIFFScanlineSize(tif));
  for (int plane = 0; plane < planes; ++plane) {
    for (int y = 0; y < r.height; ++y) {
      if (TIFFReadScanline(tif, line.data(), static_cast<std::uint32_t>(y),
                           static_cast<std::uint16_t>(plane)) < 0) {
        throw FormatError(name + ": failed to decode scanline " + std::to_string(y));
      }
      for (int x = 0; x < r.width; ++x) {
        for (int s = 0; s < spp; ++s) {
          r.at(x, y, separate ? plane : s) = line[static_cast<std::size_t>(x) * spp + s];
        }
      }
    }
  }
}

void silence_warnings(const char*, const char*, va_list) {}

}  // namespace

GeoRaster read_geotiff(const std::filesystem::path& path) {
  register_geotiff_tags();
  const std::string name = path.string();
  auto previous = TIFFSetWarningHandler(silence_warnings);
  TiffHandle tif(TIFFOpen(name.c_str(), "r"));
  TIFFSetWarningHandler(previous);
  if (!tif) throw FormatError("cannot open GeoTIFF " + name);

  std::uint32_t width = 0, height = 0;
  std::uint16_t bits = 0, spp = 1, compression = COMPRESSION_NONE, sample_format = SAMPLEFORMAT_UINT;
  TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &width);
  TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &height);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bits);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &spp);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_COMPRESSION, &compression);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLEFORMAT, &sample_format);

  if (bits != 8 || sample_format != SAMPLEFORMAT_UINT) {
    throw FormatError(name + ": only 8-bit unsigned samples are supported (got " +
                      std::to_string(bits) + " bits)");
  }
  if (spp != 1 && spp != 3) {
    throw FormatError(name + ": expected 1 or 3 bands, got " + std::to_string(spp));
  }
  if (compression != COMPRESSION_NONE && compression != COMPRESSION_ADOBE_DEFLATE &&
      compression != COMPRESSION_DEFLATE) {
    throw FormatError(name + ": unsupported compression scheme " + std::to_string(compression));
  }

  std::uint16_t raster_type = 1;
  const auto geokeys = get_array<std::uint16_t>(tif.get(), kGeoKeyDirectory);
  const std::string crs = crs_from_geokeys(geokeys, raster_type);

  std::array<double, 6> gt{};
  const auto matrix = get_array<double>(tif.get(), kModelTransformation);
  const auto scale = get_array<double>(tif.get(), kModelPixelScale);
  const auto tie = get_array<double>(tif.get(), kModelTiepoint);
  if (matrix.size() >= 16) {
    gt = {matrix[3], matrix[0], matrix[1], matrix[7], matrix[4], matrix[5]};
  } else if (scale.size() >= 2 && tie.size() >= 6) {
    gt = {tie[3] - tie[0] * scale[0], scale[0], 0.0, tie[4] + tie[1] * scale[1], 0.0, -scale[1]};
  } else {
    throw FormatError(name + ": no affine geotransform (ModelTransformation or "
                             "ModelPixelScale+ModelTiepoint) present");
  }
  auto transform = AffineGeoTransform::from_gdal(gt);
  if (raster_type == kRasterPixelIsPoint) {
    // Tie points refer to pixel centers; move the origin to the pixel corner.
    const auto corner = transform.to_world({-0.5, -0.5});
    gt[0] = corner.x;
    gt[3] = corner.y;
    transform = AffineGeoTransform::from_gdal(gt);
  }

  GeoRaster r = GeoRaster::blank(static_cast<int>(width), static_cast<int>(height), spp, transform, crs);
  r.id = path.filename().string();
  char* nodata = nullptr;
  if (TIFFGetField(tif.get(), kGdalNodata, &nodata) == 1 && nodata != nullptr) {
    try {
      r.nodata = std::stod(nodata);
    } catch (const std::exception&) {
      throw FormatError(name + ": unparseable GDAL_NODATA '" + std::string(nodata) + "'");
    }
  }
  read_pixels(tif.get(), r, name);
  return r;
}

void write_geotiff(const std::filesystem::path& path, const GeoRaster& raster,
                   const GeoTiffWriteOptions& options) {
  register_geotiff_tags();
  raster.validate();
  const std::string name = path.string();
  TiffHandle tif(TIFFOpen(name.c_str(), "w"));
  if (!tif) throw FormatError("cannot create GeoTIFF " + name);
  TIFF* t = tif.get();

  TIFFSetField(t, TIFFTAG_IMAGEWIDTH, static_cast<std::uint32_t>(raster.width));
  TIFFSetField(t, TIFFTAG_IMAGELENGTH, static_cast<std::uint32_t>(raster.height));
  TIFFSetField(t, TIFFTAG_BITSPERSAMPLE, 8);
  TIFFSetField(t, TIFFTAG_SAMPLESPERPIXEL, static_cast<std::uint16_t>(raster.bands));
  TIFFSetField(t, TIFFTAG_SAMPLEFORMAT, SAMPLEFORMAT_UINT);
  TIFFSetField(t, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
  TIFFSetField(t, TIFFTAG_PHOTOMETRIC, raster.bands == 3 ? PHOTOMETRIC_RGB : PHOTOMETRIC_MINISBLACK);
  TIFFSetField(t, TIFFTAG_COMPRESSION, options.compression == TiffCompression::Deflate
                                           ? COMPRESSION_ADOBE_DEFLATE
                                           : COMPRESSION_NONE);

  const auto& tr = raster.transform;
  if (tr.is_north_up() && tr.pixel_height() < 0) {
    const double scale[3] = {tr.pixel_width(), -tr.pixel_height(), 0.0};
    const double tie[6] = {0, 0, 0, tr.origin_x(), tr.origin_y(), 0};
    TIFFSetField(t, kModelPixelScale, 3, scale);
    TIFFSetField(t, kModelTiepoint, 6, tie);
  } else {
    const double m[16] = {tr.pixel_width(), tr.row_rotation(), 0, tr.origin_x(),
                          tr.col_rotation(), tr.pixel_height(), 0, tr.origin_y(),
                          0, 0, 0, 0,
                          0, 0, 0, 1};
    TIFFSetField(t, kModelTransformation, 16, m);
  }

  std::vector<std::uint16_t> keys = {1, 1, 0, 0};
  auto add_key = [&](std::uint16_t id, std::uint16_t value) {
    keys.insert(keys.end(), {id, 0, 1, value});
    ++keys[3];
  };
  std::uint16_t code = 0;
  if (raster.crs_id.rfind("EPSG:", 0) == 0) {
    code = static_cast<std::uint16_t>(std::stoi(raster.crs_id.substr(5)));
  }
  const bool geographic = code >= 4000 && code < 5000;
  add_key(kGTModelTypeGeoKey, geographic ? 2 : 1);
  add_key(kGTRasterTypeGeoKey, 1);
  if (code) add_key(geographic ? kGeographicTypeGeoKey : kProjectedCSTypeGeoKey, code);
  TIFFSetField(t, kGeoKeyDirectory, static_cast<std::uint16_t>(keys.size()), keys.data());
  std::string nodata_text;
  if (raster.nodata) {
    nodata_text = std::to_string(*raster.nodata);
    TIFFSetField(t, kGdalNodata, nodata_text.c_str());
  }

  const std::size_t row_bytes = static_cast<std::size_t>(raster.width) * raster.bands;
  if (options.tiled) {
    const auto ts = static_cast<std::uint32_t>(options.tile_size);
    TIFFSetField(t, TIFFTAG_TILEWIDTH, ts);
    TIFFSetField(t, TIFFTAG_TILELENGTH, ts);
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(ts) * ts * raster.bands);
    for (std::uint32_t y0 = 0; y0 < static_cast<std::uint32_t>(raster.height); y0 += ts) {
      for (std::uint32_t x0 = 0; x0 < static_cast<std::uint32_t>(raster.width); x0 += ts) {
        std::fill(buf.begin(), buf.end(), 0);
        for (std::uint32_t y = 0; y < ts && y0 + y < static_cast<std::uint32_t>(raster.height); ++y) {
          const std::uint32_t n = std::min(ts, static_cast<std::uint32_t>(raster.width) - x0);
          std::memcpy(&buf[static_cast<std::size_t>(y) * ts * raster.bands],
                      &raster.data[(y0 + y) * row_bytes + static_cast<std::size_t>(x0) * raster.bands],
                      static_cast<std::size_t>(n) * raster.bands);
        }
        const auto tile = TIFFComputeTile(t, x0, y0, 0, 0);
        if (TIFFWriteEncodedTile(t, tile, buf.data(), static_cast<tmsize_t>(buf.size())) < 0) {
          throw FormatError(name + ": failed to write tile");
        }
      }
    }
  } else {
    TIFFSetField(t, TIFFTAG_ROWSPERSTRIP, TIFFDefaultStripSize(t, 0));
    std::vector<std::uint8_t> line(row_bytes);
    for (int y = 0; y < raster.height; ++y) {
      std::memcpy(line.data(), &raster.data[static_cast<std::size_t>(y) * row_bytes], row_bytes);
      if (TIFFWriteScanline(t, line.data(), static_cast<std::uint32_t>(y), 0) < 0) {
        throw FormatError(name + ": failed to write scanline " + std::to_string(y));
      }
    }
  }
}

}  // namespace pavesat::geo
