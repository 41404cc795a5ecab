#include "cinedrone/core/mission_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cinedrone/core/errors.hpp"
#include "cinedrone/core/geo.hpp"

namespace cinedrone {
namespace {

// Strict object reader: tracks which keys were consumed so leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(path_.empty() ? "/" : path_, "expected an object");
  }

  std::string child(std::string_view key) const { return path_ + "/" + std::string(key); }

  const Json* find(std::string_view key) {
    seen_.insert(std::string(key));
    auto it = j_.find(std::string(key));
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  const Json& require(std::string_view key) {
    const Json* v = find(key);
    if (v == nullptr) throw ParseError(child(key), "missing required field");
    return *v;
  }

  double number(std::string_view key) {
    const Json& v = require(key);
    if (!v.is_number()) throw ParseError(child(key), "expected a number");
    return v.get<double>();
  }

  std::optional<double> opt_number(std::string_view key) {
    const Json* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) throw ParseError(child(key), "expected a number");
    return v->get<double>();
  }

  std::string string(std::string_view key) {
    const Json& v = require(key);
    if (!v.is_string()) throw ParseError(child(key), "expected a string");
    return v.get<std::string>();
  }

  std::optional<std::string> opt_string(std::string_view key) {
    const Json* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) throw ParseError(child(key), "expected a string");
    return v->get<std::string>();
  }

  template <typename E, typename F>
  E enumeration(std::string_view key, F&& from_string) {
    const std::string s = string(key);
    auto e = from_string(s);
    if (!e) throw ParseError(child(key), "unknown " + std::string(key) + " '" + s + "'");
    return *e;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ParseError(child(it.key()), "unknown field");
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// Angles go through a degree/radian conversion on every round trip; pinning them to 12
// significant digits on disk keeps serialize(parse(serialize(m))) byte-stable.
double canonical_degrees(double radians) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", rad2deg(radians));
  double d = std::strtod(buf, nullptr);
  return d == 0.0 ? 0.0 : d;
}

const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

}  // namespace

GeoPoint geo_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  GeoPoint g{r.number("lat"), r.number("lon"), r.number("alt")};
  r.finish();
  if (g.lat < -90.0 || g.lat > 90.0) throw ParseError(r.child("lat"), "latitude out of range");
  if (g.lon < -180.0 || g.lon > 180.0) throw ParseError(r.child("lon"), "longitude out of range");
  return g;
}

Json geo_to_json(const GeoPoint& g) { return Json{{"lat", g.lat}, {"lon", g.lon}, {"alt", g.alt}}; }

LocalPoint local_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  LocalPoint p(r.number("x"), r.number("y"), r.opt_number("z").value_or(0.0));
  r.finish();
  if (!p.allFinite()) throw ParseError(path, "non-finite coordinate");
  return p;
}

Json local_to_json(const LocalPoint& p) { return Json{{"x", p.x()}, {"y", p.y()}, {"z", p.z()}}; }

ShootingAction shot_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  ShootingAction a;
  a.id = r.string("id");
  a.shot_type = r.enumeration<ShotType>("shot_type", shot_type_from_string);
  a.framing = r.enumeration<Framing>("framing", framing_from_string);
  a.start_event = r.opt_string("start_event");
  a.duration = r.number("duration_s");
  a.rt_mode = r.enumeration<RTMode>("rt_mode", rt_mode_from_string);
  if (const Json* p = r.find("rt_path")) {
    require_array(*p, r.child("rt_path"));
    for (std::size_t i = 0; i < p->size(); ++i)
      a.rt_path.push_back(geo_from_json((*p)[i], r.child("rt_path") + "/" + std::to_string(i)));
  }
  a.rt_speed = r.opt_number("rt_speed_ms");
  a.rt_id = r.opt_string("rt_id");
  a.st_type = r.enumeration<STType>("st_type", st_type_from_string);
  a.st_id = r.opt_string("st_id");

  ObjectReader pr(r.require("params"), r.child("params"));
  for (const auto& info : kParamTable) {
    auto v = pr.opt_number(info.name);
    if (v && info.angular) v = deg2rad(*v);
    a.params.*(info.member) = v;
  }
  pr.finish();
  r.finish();
  return a;
}

Json shot_to_json(const ShootingAction& a) {
  Json j;
  j["id"] = a.id;
  j["shot_type"] = to_string(a.shot_type);
  j["framing"] = to_string(a.framing);
  if (a.start_event) j["start_event"] = *a.start_event;
  j["duration_s"] = a.duration;
  j["rt_mode"] = to_string(a.rt_mode);
  Json path = Json::array();
  for (const auto& g : a.rt_path) path.push_back(geo_to_json(g));
  j["rt_path"] = std::move(path);
  if (a.rt_speed) j["rt_speed_ms"] = *a.rt_speed;
  if (a.rt_id) j["rt_id"] = *a.rt_id;
  j["st_type"] = to_string(a.st_type);
  if (a.st_id) j["st_id"] = *a.st_id;
  Json params = Json::object();
  for (const auto& info : kParamTable) {
    const auto& v = a.params.*(info.member);
    if (v) params[std::string(info.name)] = info.angular ? canonical_degrees(*v) : *v;
  }
  j["params"] = std::move(params);
  return j;
}

Mission mission_from_json(const Json& j) {
  ObjectReader r(j, "");
  Mission m;
  m.origin = geo_from_json(r.require("origin"), "/origin");
  if (const Json* ev = r.find("event_estimates")) {
    if (!ev->is_object()) throw ParseError("/event_estimates", "expected an object");
    for (auto it = ev->begin(); it != ev->end(); ++it) {
      if (!it->is_number()) throw ParseError("/event_estimates/" + it.key(), "expected a number");
      m.event_estimates[it.key()] = it->get<double>();
    }
  }
  const Json& shots = require_array(r.require("shots"), "/shots");
  for (std::size_t i = 0; i < shots.size(); ++i)
    m.shots.push_back(shot_from_json(shots[i], "/shots/" + std::to_string(i)));
  r.finish();
  return m;
}

Json mission_to_json(const Mission& m) {
  Json j;
  j["origin"] = geo_to_json(m.origin);
  Json ev = Json::object();
  for (const auto& [name, t] : m.event_estimates) ev[name] = t;
  j["event_estimates"] = std::move(ev);
  Json shots = Json::array();
  for (const auto& s : m.shots) shots.push_back(shot_to_json(s));
  j["shots"] = std::move(shots);
  return j;
}

Mission parse_mission(std::string_view bytes) {
  Json j;
  try {
    j = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("/", std::string("malformed JSON: ") + e.what());
  }
  return mission_from_json(j);
}

std::string serialize_mission(const Mission& m) { return mission_to_json(m).dump(2) + "\n"; }

Action action_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind = r.string("action");
  if (kind == "shooting") {
    auto shot = shot_from_json(r.require("shot"), r.child("shot"));
    r.finish();
    return shot;
  }
  if (kind != "navigation") throw ParseError(r.child("action"), "unknown action '" + kind + "'");
  NavigationAction n;
  n.kind = r.enumeration<NavigationKind>("kind", navigation_kind_from_string);
  n.altitude = r.opt_number("altitude").value_or(0.0);
  if (const Json* w = r.find("waypoints")) {
    require_array(*w, r.child("waypoints"));
    for (std::size_t i = 0; i < w->size(); ++i)
      n.waypoints.push_back(geo_from_json((*w)[i], r.child("waypoints") + "/" + std::to_string(i)));
  }
  r.finish();
  if (n.kind == NavigationKind::GoToWaypoint && n.waypoints.empty())
    throw ParseError(r.child("waypoints"), "go_to_waypoint needs at least one waypoint");
  return n;
}

Json action_to_json(const Action& a) {
  if (const auto* s = as_shot(a)) return Json{{"action", "shooting"}, {"shot", shot_to_json(*s)}};
  const auto& n = std::get<NavigationAction>(a);
  Json j{{"action", "navigation"}, {"kind", to_string(n.kind)}};
  if (n.kind == NavigationKind::TakeOff) j["altitude"] = n.altitude;
  if (n.kind == NavigationKind::GoToWaypoint) {
    Json w = Json::array();
    for (const auto& g : n.waypoints) w.push_back(geo_to_json(g));
    j["waypoints"] = std::move(w);
  }
  return j;
}

DronePlan plan_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  DronePlan p;
  p.drone_id = r.string("drone_id");
  const Json& actions = require_array(r.require("actions"), r.child("actions"));
  for (std::size_t i = 0; i < actions.size(); ++i)
    p.actions.push_back(action_from_json(actions[i], r.child("actions") + "/" + std::to_string(i)));
  r.finish();
  return p;
}

Json plan_to_json(const DronePlan& p) {
  Json actions = Json::array();
  for (const auto& a : p.actions) actions.push_back(action_to_json(a));
  return Json{{"drone_id", p.drone_id}, {"actions", std::move(actions)}};
}

std::string read_text_file(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw Error("cannot open " + filename);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Mission load_mission_file(const std::string& filename) { return parse_mission(read_text_file(filename)); }

}  // namespace cinedrone
