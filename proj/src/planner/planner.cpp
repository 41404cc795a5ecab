#include "cinedrone/planner/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cinedrone/core/errors.hpp"
#include "cinedrone/core/geo.hpp"
#include "cinedrone/shot/geometry.hpp"

namespace cinedrone::planner {

ShotEndpoints shot_endpoints(const ShootingAction& a, const GeoPoint& origin) {
  const shot::Rail rail(geo_path_to_local(a.rt_path, origin));
  const double speed = a.rt_speed.value_or(0.0);
  auto pose_at = [&](double t) {
    return shot::reference_setpoint(a, shot::rail_frame(rail, speed, t), t, std::nullopt).position;
  };
  return {pose_at(0.0), pose_at(a.duration)};
}

std::vector<PlanningUnit> build_units(const Mission& m) {
  std::vector<PlanningUnit> units;
  for (std::size_t i = 0; i < m.shots.size(); ++i) {
    const auto& s = m.shots[i];
    if (units.empty() || s.start_event) {
      PlanningUnit u;
      u.event = s.start_event;
      if (s.start_event) {
        auto it = m.event_estimates.find(*s.start_event);
        if (it != m.event_estimates.end()) u.estimate = it->second;
      }
      units.push_back(std::move(u));
    }
    units.back().shots.push_back(i);
  }
  return units;
}

std::vector<LocalPoint> navigation_route(const OccupancyGrid& grid, const LocalPoint& from, const LocalPoint& to,
                                         double transit_altitude) {
  const PathResult path = astar_path(grid, from, to);
  std::vector<LocalPoint> route;
  for (std::size_t k = 1; k + 1 < path.waypoints.size(); ++k)
    route.emplace_back(path.waypoints[k].x(), path.waypoints[k].y(), transit_altitude);
  route.push_back(to);
  return route;
}

namespace {

double route_length(const LocalPoint& from, const std::vector<LocalPoint>& route) {
  double len = 0.0;
  LocalPoint prev = from;
  for (const auto& p : route) {
    len += (p - prev).norm();
    prev = p;
  }
  return len;
}

NavigationAction goto_action(const std::vector<LocalPoint>& route, const GeoPoint& origin) {
  NavigationAction nav;
  nav.kind = NavigationKind::GoToWaypoint;
  for (const auto& p : route) nav.waypoints.push_back(local_to_geo(p, origin));
  return nav;
}

struct DroneTrack {
  LocalPoint position;
  double time = 0.0;
  double budget_remaining = 0.0;
  bool airborne = false;
  std::set<std::string> events;
  std::vector<Action> actions;
  bool used = false;
};

struct Trial {
  DroneTrack after;
  std::vector<ScheduledShot> schedule;
};

}  // namespace

std::optional<BaseChoice> nearest_reachable_base(const OccupancyGrid& grid, const LocalPoint& from,
                                                 double transit_altitude, const std::set<std::size_t>& avoid) {
  const auto& bases = grid.map().base_stations;
  std::vector<std::size_t> order(bases.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool ka = avoid.count(a) != 0, kb = avoid.count(b) != 0;
    if (ka != kb) return kb;
    return (bases[a] - from).norm() < (bases[b] - from).norm();
  });
  for (std::size_t idx : order) {
    const LocalPoint above(bases[idx].x(), bases[idx].y(), std::max(transit_altitude, bases[idx].z()));
    try {
      return BaseChoice{idx, navigation_route(grid, from, above, transit_altitude)};
    } catch (const NoPathError&) {
    }
  }
  return std::nullopt;
}

PlanResult plan_units(const Mission& m, const std::vector<PlanningUnit>& units, const std::vector<DroneSpec>& drones,
                      const std::map<std::string, DroneStart>& starts, const WorldMap& map,
                      const PlannerConfig& cfg) {
  if (drones.empty()) throw ValidationError("planning needs at least one drone");
  for (const auto& d : drones)
    if (!(d.max_speed > 0.0) || !(d.flight_time_budget > 0.0))
      throw ValidationError("drone " + d.drone_id + " needs max_speed > 0 and budget > 0");

  const OccupancyGrid grid(map, cfg.cell);
  PlanResult result;

  std::vector<ShotEndpoints> ends;
  ends.reserve(m.shots.size());
  for (const auto& s : m.shots) ends.push_back(shot_endpoints(s, m.origin));

  std::vector<DroneTrack> tracks;
  for (const auto& d : drones) {
    DroneTrack t;
    auto it = starts.find(d.drone_id);
    if (it != starts.end()) {
      t.position = it->second.position;
      t.time = it->second.time;
      t.budget_remaining = it->second.budget_remaining;
      t.airborne = it->second.airborne;
    } else {
      t.position = d.home;
      t.budget_remaining = d.flight_time_budget;
    }
    tracks.push_back(std::move(t));
  }

  auto attempt = [&](const PlanningUnit& u, std::size_t di) -> std::optional<Trial> {
    const DroneSpec& spec = drones[di];
    Trial trial;
    DroneTrack& tr = trial.after;
    tr = tracks[di];
    const double t0 = tr.time;
    const double v = spec.max_speed;
    try {
      if (!tr.airborne) {
        NavigationAction takeoff;
        takeoff.kind = NavigationKind::TakeOff;
        takeoff.altitude = cfg.transit_altitude;
        tr.actions.emplace_back(takeoff);
        tr.time += std::abs(cfg.transit_altitude - tr.position.z()) / v;
        tr.position.z() = cfg.transit_altitude;
        tr.airborne = true;
      }
      for (std::size_t k = 0; k < u.shots.size(); ++k) {
        const std::size_t si = u.shots[k];
        const auto route = navigation_route(grid, tr.position, ends[si].start, cfg.transit_altitude);
        tr.time += route_length(tr.position, route) / v;
        tr.actions.emplace_back(goto_action(route, m.origin));
        const double arrival = tr.time;
        double begin = arrival;
        if (k == 0 && u.event) {
          if (u.event_fired) {
            if (arrival > u.estimate + m.shots[si].duration) return std::nullopt;
          } else {
            if (arrival > u.estimate - cfg.slack) return std::nullopt;
            begin = u.estimate;
          }
        }
        tr.time = begin + m.shots[si].duration;
        tr.position = ends[si].end;
        tr.actions.emplace_back(m.shots[si]);
        trial.schedule.push_back(
            {m.shots[si].id, spec.drone_id, arrival, begin, tr.time, ends[si].start, ends[si].end});
      }
      const auto base = nearest_reachable_base(grid, tr.position, cfg.transit_altitude);
      if (!base) return std::nullopt;
      const LocalPoint& station = map.base_stations[base->index];
      const double ret = (route_length(tr.position, base->route) + (base->route.back().z() - station.z())) / v;
      const double used = tr.time + ret - t0;
      if (used > tr.budget_remaining - cfg.reserve_fraction * spec.flight_time_budget) return std::nullopt;
      tr.budget_remaining -= tr.time - t0;
    } catch (const NoPathError&) {
      return std::nullopt;
    }
    if (u.event) tr.events.insert(*u.event);
    tr.used = true;
    return trial;
  };

  std::vector<std::size_t> order(units.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return units[a].estimate < units[b].estimate; });

  for (std::size_t ui : order) {
    const PlanningUnit& u = units[ui];
    std::optional<std::size_t> best;
    std::optional<Trial> best_trial;
    for (std::size_t di = 0; di < drones.size(); ++di) {
      if (u.pinned_drone && *u.pinned_drone != drones[di].drone_id) continue;
      if (u.event && tracks[di].events.count(*u.event)) continue;
      auto trial = attempt(u, di);
      if (!trial) continue;
      if (!best || tracks[di].time < tracks[*best].time) {
        best = di;
        best_trial = std::move(trial);
      }
    }
    if (!best) {
      for (std::size_t si : u.shots) result.uncovered.push_back(m.shots[si].id);
      continue;
    }
    tracks[*best] = std::move(best_trial->after);
    result.schedule.insert(result.schedule.end(), best_trial->schedule.begin(), best_trial->schedule.end());
  }

  std::set<std::size_t> claimed;
  for (std::size_t di = 0; di < drones.size(); ++di) {
    DronePlan plan;
    plan.drone_id = drones[di].drone_id;
    DroneTrack& tr = tracks[di];
    if (tr.airborne) {
      const auto base = nearest_reachable_base(grid, tr.position, cfg.transit_altitude, claimed);
      if (base) {
        claimed.insert(base->index);
        plan.actions = std::move(tr.actions);
        plan.actions.emplace_back(goto_action(base->route, m.origin));
      } else {
        plan.actions = std::move(tr.actions);
        result.notes.push_back("drone " + plan.drone_id + ": no reachable base station, landing in place");
      }
      NavigationAction land;
      land.kind = NavigationKind::Land;
      plan.actions.emplace_back(land);
    }
    result.plans.push_back(std::move(plan));
  }

  for (const auto& s : result.schedule) {
    const auto it = std::find_if(m.shots.begin(), m.shots.end(), [&](const auto& a) { return a.id == s.shot_id; });
    if (it != m.shots.end() && it->rt_mode == RTMode::ActualTarget)
      result.notes.push_back("shot " + s.shot_id + ": endpoints estimated from rt_speed");
  }
  return result;
}

PlanResult plan_mission(const Mission& m, const std::vector<DroneSpec>& drones, const WorldMap& map,
                        const PlannerConfig& cfg) {
  return plan_units(m, build_units(m), drones, {}, map, cfg);
}

}  // namespace cinedrone::planner
