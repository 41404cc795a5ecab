#include "cinedrone/planner/world_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cinedrone/core/errors.hpp"

namespace cinedrone::planner {
namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = cross(b - a, c - a);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

double segment_segment_distance(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

bool boxes_apart(const Vec2& a, const Vec2& b, const Polygon& poly, double margin) {
  return std::max(a.x(), b.x()) + margin < poly.lo.x() || std::min(a.x(), b.x()) - margin > poly.hi.x() ||
         std::max(a.y(), b.y()) + margin < poly.lo.y() || std::min(a.y(), b.y()) - margin > poly.hi.y();
}

}  // namespace

void Polygon::finalize() {
  if (vertices.empty()) return;
  lo = hi = vertices.front();
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (point_segment_distance(p, v[j], v[i]) == 0.0) return true;  // boundary counts as inside
    if ((v[i].y() > p.y()) != (v[j].y() > p.y())) {
      const double x = v[j].x() + (p.y() - v[j].y()) * (v[i].x() - v[j].x()) / (v[i].y() - v[j].y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_polygon(const Vec2& p, const Polygon& poly) {
  if (point_in_polygon(p, poly)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
    best = std::min(best, point_segment_distance(p, v[j], v[i]));
  return best;
}

bool segment_intersects_polygon(const Vec2& a, const Vec2& b, const Polygon& poly) {
  if (poly.vertices.size() < 3 || boxes_apart(a, b, poly, 0.0)) return false;
  if (point_in_polygon(a, poly) || point_in_polygon(b, poly)) return true;
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
    if (segments_intersect(a, b, v[j], v[i])) return true;
  return false;
}

double segment_distance_to_polygon(const Vec2& a, const Vec2& b, const Polygon& poly) {
  if (segment_intersects_polygon(a, b, poly)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
    best = std::min(best, segment_segment_distance(a, b, v[j], v[i]));
  return best;
}

bool in_no_fly_zone(const WorldMap& map, const Vec2& p) {
  return std::any_of(map.no_fly_zones.begin(), map.no_fly_zones.end(),
                     [&](const Polygon& z) { return point_in_polygon(p, z); });
}

bool segment_clear(const WorldMap& map, const Vec2& a, const Vec2& b, double clearance) {
  for (const auto& z : map.no_fly_zones) {
    if (boxes_apart(a, b, z, clearance)) continue;
    if (clearance <= 0.0) {
      if (segment_intersects_polygon(a, b, z)) return false;
    } else if (segment_distance_to_polygon(a, b, z) < clearance) {
      return false;
    }
  }
  return true;
}

void validate_map(const WorldMap& map) {
  const auto& b = map.bounds;
  if (!(b.max_x > b.min_x) || !(b.max_y > b.min_y)) throw ValidationError("map bounds are empty");
  for (std::size_t k = 0; k < map.no_fly_zones.size(); ++k) {
    const auto& v = map.no_fly_zones[k].vertices;
    const std::string name = "no-fly zone " + std::to_string(k);
    if (v.size() < 3) throw ValidationError(name + " needs at least 3 vertices");
    for (const auto& p : v)
      if (!b.contains(p)) throw ValidationError(name + " leaves the map bounds");
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
        if (adjacent) continue;
        if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
          throw ValidationError(name + " is self-intersecting");
      }
    }
  }
  for (const auto& s : map.base_stations) {
    if (!b.contains(s.head<2>())) throw ValidationError("base station outside map bounds");
    if (in_no_fly_zone(map, s.head<2>())) throw ValidationError("base station inside a no-fly zone");
  }
}

WorldMap map_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("/", "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "bounds" && it.key() != "no_fly_zones" && it.key() != "base_stations")
      throw ParseError("/" + it.key(), "unknown field");
  WorldMap map;
  if (!j.contains("bounds")) throw ParseError("/bounds", "missing required field");
  const Json& b = j.at("bounds");
  for (const char* key : {"min_x", "min_y", "max_x", "max_y"})
    if (!b.contains(key) || !b.at(key).is_number())
      throw ParseError(std::string("/bounds/") + key, "expected a number");
  map.bounds = {b.at("min_x").get<double>(), b.at("min_y").get<double>(), b.at("max_x").get<double>(),
                b.at("max_y").get<double>()};
  if (j.contains("no_fly_zones")) {
    const Json& zones = j.at("no_fly_zones");
    if (!zones.is_array()) throw ParseError("/no_fly_zones", "expected an array");
    for (std::size_t k = 0; k < zones.size(); ++k) {
      const std::string path = "/no_fly_zones/" + std::to_string(k);
      if (!zones[k].is_array()) throw ParseError(path, "expected an array of vertices");
      Polygon poly;
      for (std::size_t i = 0; i < zones[k].size(); ++i)
        poly.vertices.push_back(local_from_json(zones[k][i], path + "/" + std::to_string(i)).head<2>());
      poly.finalize();
      map.no_fly_zones.push_back(std::move(poly));
    }
  }
  if (j.contains("base_stations")) {
    const Json& st = j.at("base_stations");
    if (!st.is_array()) throw ParseError("/base_stations", "expected an array");
    for (std::size_t i = 0; i < st.size(); ++i)
      map.base_stations.push_back(local_from_json(st[i], "/base_stations/" + std::to_string(i)));
  }
  validate_map(map);
  return map;
}

Json map_to_json(const WorldMap& map) {
  Json zones = Json::array();
  for (const auto& z : map.no_fly_zones) {
    Json poly = Json::array();
    for (const auto& v : z.vertices) poly.push_back(Json{{"x", v.x()}, {"y", v.y()}});
    zones.push_back(std::move(poly));
  }
  Json stations = Json::array();
  for (const auto& s : map.base_stations) stations.push_back(local_to_json(s));
  return Json{{"bounds",
               {{"min_x", map.bounds.min_x},
                {"min_y", map.bounds.min_y},
                {"max_x", map.bounds.max_x},
                {"max_y", map.bounds.max_y}}},
              {"no_fly_zones", std::move(zones)},
              {"base_stations", std::move(stations)}};
}

WorldMap parse_map(std::string_view bytes) {
  Json j;
  try {
    j = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("/", std::string("malformed JSON: ") + e.what());
  }
  return map_from_json(j);
}

WorldMap load_map_file(const std::string& filename) { return parse_map(read_text_file(filename)); }

}  // namespace cinedrone::planner
