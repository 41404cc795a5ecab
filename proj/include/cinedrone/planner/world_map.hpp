#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cinedrone/core/mission_io.hpp"
#include "cinedrone/core/types.hpp"

namespace cinedrone::planner {

using Vec2 = Eigen::Vector2d;

struct Polygon {
  std::vector<Vec2> vertices;  // implicitly closed
  Vec2 lo{0, 0}, hi{0, 0};     // bounding box, filled by finalize()
  void finalize();
};

struct Bounds {
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  bool contains(const Vec2& p) const {
    return p.x() >= min_x && p.x() <= max_x && p.y() >= min_y && p.y() <= max_y;
  }
};

struct WorldMap {
  std::vector<Polygon> no_fly_zones;
  std::vector<LocalPoint> base_stations;
  Bounds bounds;
};

bool point_in_polygon(const Vec2& p, const Polygon& poly);
double distance_to_polygon(const Vec2& p, const Polygon& poly);  // 0 inside
bool segment_intersects_polygon(const Vec2& a, const Vec2& b, const Polygon& poly);
double segment_distance_to_polygon(const Vec2& a, const Vec2& b, const Polygon& poly);  // 0 on contact

bool in_no_fly_zone(const WorldMap& map, const Vec2& p);
bool segment_clear(const WorldMap& map, const Vec2& a, const Vec2& b, double clearance = 0.0);

/// Checks the structural invariants (simple polygons, stations outside zones, bounds
/// covering every feature). Throws ValidationError.
void validate_map(const WorldMap& map);

WorldMap map_from_json(const Json& j);
Json map_to_json(const WorldMap& map);
WorldMap parse_map(std::string_view bytes);
WorldMap load_map_file(const std::string& filename);

}  // namespace cinedrone::planner
