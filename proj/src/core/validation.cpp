#include "cinedrone/core/validation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cinedrone {

std::vector<std::string_view> required_params(ShotType t) {
  switch (t) {
    case ShotType::Static:
    case ShotType::FlyThrough:
      return {"pan_s", "tilt_s", "pan_e", "tilt_e", "z_0"};
    case ShotType::Elevator:
      return {"z_s", "z_e"};
    case ShotType::ChaseLead:
      return {"x_s", "x_e", "z_0"};
    case ShotType::Flyby:
      return {"x_s", "x_e", "y_0", "z_0"};
    case ShotType::Lateral:
      return {"y_0", "z_0"};
    case ShotType::Establish:
      return {"x_s", "x_e", "z_s", "z_e"};
    case ShotType::Orbit:
      return {"r_0", "azimuth_s", "angular_speed", "z_0"};
  }
  return {};
}

std::vector<Finding> validate_shot(const ShootingAction& a) {
  std::vector<Finding> out;
  auto add = [&](std::string rule) { out.push_back({a.id, std::move(rule)}); };
  const std::string type(to_string(a.shot_type));

  if (a.id.empty()) add("shot id must be nonempty");
  if (!(a.duration > 0.0) || !std::isfinite(a.duration)) add("duration must be > 0");

  const auto required = required_params(a.shot_type);
  for (const auto& info : kParamTable) {
    const auto& v = a.params.*(info.member);
    const bool needed = std::find(required.begin(), required.end(), info.name) != required.end();
    if (needed && !v) add(type + " requires " + std::string(info.name));
    if (!needed && v) add(type + " does not take " + std::string(info.name));
    if (v && !std::isfinite(*v)) add(std::string(info.name) + " must be finite");
  }
  if (a.params.r_0 && !(*a.params.r_0 > 0.0)) add("r_0 must be > 0");

  if (a.rt_speed && !(*a.rt_speed >= 0.0)) add("rt_speed must be >= 0");
  if (a.rt_path.empty()) add("rt_path must list at least one position");
  for (const auto& g : a.rt_path)
    if (g.lat < -90 || g.lat > 90 || g.lon < -180 || g.lon > 180) add("rt_path position out of range");

  switch (a.rt_mode) {
    case RTMode::VirtualTraj:
      if (!a.rt_speed) add("virtual_traj requires rt_speed");
      break;
    case RTMode::VirtualPath:
      if (!a.rt_id) add("virtual_path requires rt_id");
      break;
    case RTMode::ActualTarget:
      if (a.st_type == STType::None) add("actual_target requires a shooting target");
      if (!a.st_id) add("actual_target requires st_id");
      break;
  }
  if (a.st_type == STType::Real && !a.st_id) add("real shooting target requires st_id");
  return out;
}

std::vector<Finding> validate_mission(const Mission& m) {
  std::vector<Finding> out;
  std::set<std::string> ids;
  for (const auto& s : m.shots) {
    if (!ids.insert(s.id).second) out.push_back({s.id, "duplicate shot id"});
    auto f = validate_shot(s);
    out.insert(out.end(), f.begin(), f.end());
    if (s.start_event && !m.event_estimates.count(*s.start_event))
      out.push_back({s.id, "start_event " + *s.start_event + " has no time estimate"});
  }
  return out;
}

std::string to_string(const Finding& f) {
  return f.shot_id.empty() ? f.rule : f.shot_id + ": " + f.rule;
}

}  // namespace cinedrone
