#include "cinedrone/gcs/scenario.hpp"

#include <set>

#include "cinedrone/core/errors.hpp"
#include "cinedrone/core/geo.hpp"

namespace cinedrone::gcs {

WorldSetup default_world(const Mission& m) {
  WorldSetup w;
  for (const auto& [name, t] : m.event_estimates) {
    sim::EventTrigger trig;
    trig.name = name;
    trig.kind = sim::EventTrigger::Kind::AtTime;
    trig.time = t;
    w.triggers.push_back(trig);
  }

  std::set<std::string> seen;
  double start = 0.0;
  for (const auto& s : m.shots) {
    if (s.start_event) {
      auto it = m.event_estimates.find(*s.start_event);
      start = it != m.event_estimates.end() ? it->second : start;
    }
    std::vector<std::string> ids;
    if (s.rt_mode == RTMode::VirtualPath && s.rt_id) ids.push_back(*s.rt_id);
    if ((s.rt_mode == RTMode::ActualTarget || s.st_type == STType::Real) && s.st_id) ids.push_back(*s.st_id);
    for (const auto& id : ids) {
      if (!seen.insert(id).second) continue;
      sim::SimTarget t;
      t.id = id;
      t.path = geo_path_to_local(s.rt_path, m.origin);
      t.speed = s.rt_speed.value_or(0.0);
      t.start_time = start;
      w.targets.push_back(std::move(t));
    }
    start += s.duration;
  }
  return w;
}

namespace {

void only_fields(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ParseError(path + "/" + it.key(), "unknown field");
  }
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string() || j.get_ref<const std::string&>().empty()) throw ParseError(path, "expected a nonempty string");
  return j.get<std::string>();
}

const Json& field(const Json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ParseError(path + "/" + key, "missing required field");
  return j[key];
}

}  // namespace

WorldSetup world_from_json(const Json& j) {
  only_fields(j, "", {"targets", "triggers"});
  WorldSetup w;
  const Json targets = j.value("targets", Json::array());
  if (!targets.is_array()) throw ParseError("/targets", "expected an array");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string p = "/targets/" + std::to_string(i);
    const Json& tj = targets[i];
    only_fields(tj, p, {"id", "path", "speed", "noise_sigma", "report_delay", "start_time"});
    sim::SimTarget t;
    t.id = text(field(tj, p, "id"), p + "/id");
    const Json& path = field(tj, p, "path");
    if (!path.is_array() || path.empty()) throw ParseError(p + "/path", "expected a nonempty array");
    for (std::size_t k = 0; k < path.size(); ++k)
      t.path.push_back(local_from_json(path[k], p + "/path/" + std::to_string(k)));
    t.speed = number(field(tj, p, "speed"), p + "/speed");
    if (t.speed < 0.0) throw ParseError(p + "/speed", "must be non-negative");
    if (tj.contains("noise_sigma")) t.noise_sigma = number(tj["noise_sigma"], p + "/noise_sigma");
    if (tj.contains("report_delay")) t.report_delay = number(tj["report_delay"], p + "/report_delay");
    if (tj.contains("start_time")) t.start_time = number(tj["start_time"], p + "/start_time");
    if (t.noise_sigma < 0.0) throw ParseError(p + "/noise_sigma", "must be non-negative");
    if (t.report_delay < 0.0) throw ParseError(p + "/report_delay", "must be non-negative");
    w.targets.push_back(std::move(t));
  }
  const Json triggers = j.value("triggers", Json::array());
  if (!triggers.is_array()) throw ParseError("/triggers", "expected an array");
  for (std::size_t i = 0; i < triggers.size(); ++i) {
    const std::string p = "/triggers/" + std::to_string(i);
    const Json& tj = triggers[i];
    sim::EventTrigger trig;
    if (tj.is_object() && tj.contains("at")) {
      only_fields(tj, p, {"name", "at"});
      trig.kind = sim::EventTrigger::Kind::AtTime;
      trig.time = number(tj["at"], p + "/at");
    } else {
      only_fields(tj, p, {"name", "target_id", "center", "radius"});
      trig.kind = sim::EventTrigger::Kind::TargetInRegion;
      trig.target_id = text(field(tj, p, "target_id"), p + "/target_id");
      trig.center = local_from_json(field(tj, p, "center"), p + "/center");
      trig.radius = number(field(tj, p, "radius"), p + "/radius");
      if (!(trig.radius > 0.0)) throw ParseError(p + "/radius", "must be positive");
    }
    trig.name = text(field(tj, p, "name"), p + "/name");
    w.triggers.push_back(std::move(trig));
  }
  return w;
}

WorldSetup load_world_file(const std::string& filename) {
  const std::string text = read_text_file(filename);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  return world_from_json(j);
}

std::vector<planner::DroneSpec> make_drones(const planner::WorldMap& map, int n, double max_speed,
                                            double flight_time_budget) {
  if (n < 0) throw ValidationError("drone count must be non-negative");
  if (n > 0 && map.base_stations.empty()) throw ValidationError("map has no base stations for drone homes");
  std::vector<planner::DroneSpec> drones;
  for (int k = 0; k < n; ++k) {
    const std::size_t nb = map.base_stations.size();
    const LocalPoint& base = map.base_stations[static_cast<std::size_t>(k) % nb];
    const double shift = 15.0 * static_cast<double>(static_cast<std::size_t>(k) / nb);
    planner::DroneSpec d;
    d.drone_id = "d" + std::to_string(k + 1);
    d.home = base + LocalPoint(shift, 0.0, 0.0);
    d.max_speed = max_speed;
    d.flight_time_budget = flight_time_budget;
    drones.push_back(d);
  }
  return drones;
}

}  // namespace cinedrone::gcs
