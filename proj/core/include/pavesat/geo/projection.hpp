#pragma once

#include "pavesat/geo/geometry.hpp"

namespace pavesat::geo {

/// Transverse Mercator on the WGS84 ellipsoid. Output in meters.
/// This is the one built-in conversion for centerlines supplied as
/// longitude/latitude; everything else must already share a projected CRS.
struct TransverseMercator {
  double central_meridian_deg = 0.0;
  double latitude_of_origin_deg = 0.0;
  double scale_factor = 0.9996;
  double false_easting = 500000.0;
  double false_northing = 0.0;

  GeoPoint forward(double lon_deg, double lat_deg) const;
};

}  // namespace pavesat::geo
