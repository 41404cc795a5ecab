#include "cinedrone/core/geo.hpp"

#include <string>

#include "cinedrone/core/errors.hpp"

namespace cinedrone {

void check_geo_point(const GeoPoint& p) {
  if (!std::isfinite(p.lat) || !std::isfinite(p.lon) || !std::isfinite(p.alt))
    throw ValidationError("non-finite geographic coordinate");
  if (p.lat < -90.0 || p.lat > 90.0)
    throw ValidationError("latitude out of range: " + std::to_string(p.lat));
  if (p.lon < -180.0 || p.lon > 180.0)
    throw ValidationError("longitude out of range: " + std::to_string(p.lon));
}

LocalPoint geo_to_local(const GeoPoint& p, const GeoPoint& origin) {
  check_geo_point(p);
  check_geo_point(origin);
  const double dlat = p.lat - origin.lat;
  if (std::abs(dlat) >= 1.0)
    throw ValidationError("point too far from origin for the flat-earth frame");
  const double dlon = std::remainder(p.lon - origin.lon, 360.0);
  return {kEarthRadius * std::cos(deg2rad(origin.lat)) * deg2rad(dlon), kEarthRadius * deg2rad(dlat),
          p.alt - origin.alt};
}

GeoPoint local_to_geo(const LocalPoint& p, const GeoPoint& origin) {
  check_geo_point(origin);
  GeoPoint g;
  g.lat = origin.lat + rad2deg(p.y() / kEarthRadius);
  g.lon = origin.lon + rad2deg(p.x() / (kEarthRadius * std::cos(deg2rad(origin.lat))));
  if (g.lon > 180.0) g.lon -= 360.0;
  if (g.lon < -180.0) g.lon += 360.0;
  g.alt = origin.alt + p.z();
  return g;
}

std::vector<LocalPoint> geo_path_to_local(const std::vector<GeoPoint>& path, const GeoPoint& origin) {
  std::vector<LocalPoint> out;
  out.reserve(path.size());
  for (const auto& g : path) out.push_back(geo_to_local(g, origin));
  return out;
}

}  // namespace cinedrone
