#include "pavesat/geo/projection.hpp"

#include <cmath>
#include <numbers>

namespace pavesat::geo {
namespace {

constexpr double kSemiMajor = 6378137.0;
constexpr double kFlattening = 1.0 / 298.257223563;

// Meridian arc length from the equator (Snyder, series in e^2).
double meridian_arc(double phi, double e2) {
  const double e4 = e2 * e2;
  const double e6 = e4 * e2;
  return kSemiMajor * ((1 - e2 / 4 - 3 * e4 / 64 - 5 * e6 / 256) * phi -
                       (3 * e2 / 8 + 3 * e4 / 32 + 45 * e6 / 1024) * std::sin(2 * phi) +
                       (15 * e4 / 256 + 45 * e6 / 1024) * std::sin(4 * phi) -
                       (35 * e6 / 3072) * std::sin(6 * phi));
}

}  // namespace

GeoPoint TransverseMercator::forward(double lon_deg, double lat_deg) const {
  constexpr double deg = std::numbers::pi / 180.0;
  const double e2 = kFlattening * (2.0 - kFlattening);
  const double ep2 = e2 / (1.0 - e2);
  const double phi = lat_deg * deg;
  const double lam = (lon_deg - central_meridian_deg) * deg;

  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double t = std::tan(phi);
  const double n = kSemiMajor / std::sqrt(1.0 - e2 * s * s);
  const double tt = t * t;
  const double cc = ep2 * c * c;
  const double a = lam * c;
  const double a2 = a * a;

  const double m = meridian_arc(phi, e2);
  const double m0 = meridian_arc(latitude_of_origin_deg * deg, e2);

  const double x =
      scale_factor * n *
      (a + (1 - tt + cc) * a2 * a / 6 +
       (5 - 18 * tt + tt * tt + 72 * cc - 58 * ep2) * a2 * a2 * a / 120);
  const double y =
      scale_factor *
      (m - m0 +
       n * t *
           (a2 / 2 + (5 - tt + 9 * cc + 4 * cc * cc) * a2 * a2 / 24 +
            (61 - 58 * tt + tt * tt + 600 * cc - 330 * ep2) * a2 * a2 * a2 / 720));
  return {false_easting + x, false_northing + y};
}

}  // namespace pavesat::geo
