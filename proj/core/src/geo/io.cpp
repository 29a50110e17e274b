#include "pavesat/geo/io.hpp"

#include <png.h>

#include <fstream>
#include <nlohmann/json.hpp>

#include "pavesat/csv.hpp"
#include "pavesat/error.hpp"

namespace pavesat::geo {

std::map<std::string, Centerline> read_centerlines(
    const std::filesystem::path& path, const std::optional<TransverseMercator>& lonlat_projection) {
  const auto table = csv::read(path);
  const auto c_route = table.column("route_id");
  const auto c_mp = table.column("milepoint");
  const auto c_x = table.column("x");
  const auto c_y = table.column("y");

  std::map<std::string, Centerline> lines;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& route = table.rows[r][c_route];
    auto& line = lines[route];
    line.route_id = route;
    GeoPoint p{table.number(r, c_x), table.number(r, c_y)};
    if (lonlat_projection) p = lonlat_projection->forward(p.x, p.y);
    line.vertices.push_back(p);
    line.milepoints.push_back(table.number(r, c_mp));
  }
  for (const auto& [route, line] : lines) line.validate();
  return lines;
}

std::vector<SectionSpec> read_sections(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto c_route = table.column("route_name");
  const auto c_from = table.column("offset_from");
  const auto c_to = table.column("offset_to");
  std::vector<SectionSpec> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out.push_back({table.rows[r][c_route], table.number(r, c_from), table.number(r, c_to)});
  }
  return out;
}

void write_section_crop(const std::filesystem::path& png_path, const SectionImage& image) {
  std::vector<std::uint8_t> rgba(static_cast<std::size_t>(image.width) * image.height * 4);
  for (std::size_t i = 0; i < image.mask.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const int band = image.bands == 3 ? c : 0;
      rgba[i * 4 + c] = image.pixels[i * image.bands + band];
    }
    rgba[i * 4 + 3] = image.mask[i] ? 255 : 0;
  }
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGBA;
  const auto name = png_path.string();
  if (!png_image_write_to_file(&png, name.c_str(), 0, rgba.data(), 0, nullptr)) {
    throw FormatError("cannot write PNG " + name + ": " + png.message);
  }
}

void write_sidecar(const std::filesystem::path& json_path, const CropSidecar& s) {
  nlohmann::ordered_json j;
  j["route_name"] = s.route_name;
  j["offset_from"] = s.offset_from;
  j["offset_to"] = s.offset_to;
  j["pixel_window"] = {{"col", s.pixel_window.col},
                       {"row", s.pixel_window.row},
                       {"width", s.pixel_window.width},
                       {"height", s.pixel_window.height}};
  j["crs_id"] = s.crs_id;
  std::ofstream out(json_path);
  if (!out) throw FormatError("cannot write " + json_path.string());
  out << j.dump(2) << '\n';
}

CropSidecar read_sidecar(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw FormatError("cannot open " + json_path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    CropSidecar s;
    s.route_name = j.at("route_name").get<std::string>();
    s.offset_from = j.at("offset_from").get<double>();
    s.offset_to = j.at("offset_to").get<double>();
    const auto& w = j.at("pixel_window");
    s.pixel_window = {w.at("col").get<int>(), w.at("row").get<int>(), w.at("width").get<int>(),
                      w.at("height").get<int>()};
    s.crs_id = j.value("crs_id", "");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(json_path.string() + ": " + e.what());
  }
}

}  // namespace pavesat::geo
