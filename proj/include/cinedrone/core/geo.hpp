#pragma once

#include <cmath>
#include <numbers>

#include "cinedrone/core/types.hpp"

namespace cinedrone {

inline constexpr double kEarthRadius = 6371000.0;

inline constexpr double deg2rad(double d) { return d * (std::numbers::pi / 180.0); }
inline constexpr double rad2deg(double r) { return r * (180.0 / std::numbers::pi); }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

void check_geo_point(const GeoPoint& p);

/// Equirectangular flat-earth projection around `origin`. Throws ValidationError for
/// out-of-range coordinates or points further than 1 degree of latitude from the origin.
LocalPoint geo_to_local(const GeoPoint& p, const GeoPoint& origin);
GeoPoint local_to_geo(const LocalPoint& p, const GeoPoint& origin);

std::vector<LocalPoint> geo_path_to_local(const std::vector<GeoPoint>& path, const GeoPoint& origin);

}  // namespace cinedrone
