#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pavesat/geo/geometry.hpp"
#include "pavesat/geo/projection.hpp"
#include "pavesat/geo/raster.hpp"

namespace pavesat::geo {

/// Reads `route_id,milepoint,x,y` rows, grouped by route. When a
/// projection is given, x/y are longitude/latitude in degrees and are
/// projected on load.
std::map<std::string, Centerline> read_centerlines(
    const std::filesystem::path& path,
    const std::optional<TransverseMercator>& lonlat_projection = std::nullopt);

/// Reads `route_name,offset_from,offset_to` rows.
std::vector<SectionSpec> read_sections(const std::filesystem::path& path);

/// Sidecar metadata written next to every crop PNG.
struct CropSidecar {
  std::string route_name;
  double offset_from = 0.0;
  double offset_to = 0.0;
  PixelWindow pixel_window;
  std::string crs_id;
};

/// Writes `<stem>.png` (RGB + alpha as mask) and `<stem>.json`.
void write_section_crop(const std::filesystem::path& png_path, const SectionImage& image);
void write_sidecar(const std::filesystem::path& json_path, const CropSidecar& sidecar);
CropSidecar read_sidecar(const std::filesystem::path& json_path);

}  // namespace pavesat::geo
