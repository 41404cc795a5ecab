#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cinedrone/core/types.hpp"
#include "cinedrone/planner/astar.hpp"
#include "cinedrone/planner/world_map.hpp"

namespace cinedrone::planner {

struct DroneSpec {
  std::string drone_id;
  LocalPoint home = LocalPoint::Zero();
  double max_speed = 6.0;
  double flight_time_budget = 1200.0;
};

/// Where a drone becomes available to the planner. Fresh drones start on the ground at
/// home at time 0 with the whole budget; re-plans pass the predicted end of the action
/// each drone is currently executing.
struct DroneStart {
  LocalPoint position = LocalPoint::Zero();
  double time = 0.0;
  double budget_remaining = 0.0;
  double airborne_since = 0.0;
  bool airborne = false;
};

struct PlannerConfig {
  double slack = 10.0;
  double cell = 2.0;
  double transit_altitude = 15.0;
  double reserve_fraction = 0.15;
};

/// Shots flown back to back by one drone: a head shot (with its start event, or the first
/// shot of the mission) followed by the event-less shots chained behind it in file order.
struct PlanningUnit {
  std::vector<std::size_t> shots;  // indices into Mission::shots
  std::optional<std::string> event;
  double estimate = 0.0;      // head start estimate (event time, or earliest time for event-less units)
  bool event_fired = false;   // the event is already latched; the head starts on arrival
  std::optional<std::string> pinned_drone;
};

struct ScheduledShot {
  std::string shot_id;
  std::string drone_id;
  double arrival = 0.0;
  double start = 0.0;
  double end = 0.0;
  LocalPoint start_position = LocalPoint::Zero();
  LocalPoint end_position = LocalPoint::Zero();
};

struct PlanResult {
  std::vector<DronePlan> plans;  // one per drone, in input order
  std::vector<std::string> uncovered;
  std::vector<std::string> notes;
  std::vector<ScheduledShot> schedule;
  std::size_t covered() const { return schedule.size(); }
};

struct ShotEndpoints {
  LocalPoint start = LocalPoint::Zero();
  LocalPoint end = LocalPoint::Zero();
};

/// Planned drone positions at the start and end of a shot, assuming the reference target
/// moves along the rail at rt_speed (also the speed estimate for real targets).
ShotEndpoints shot_endpoints(const ShootingAction& a, const GeoPoint& origin);

std::vector<PlanningUnit> build_units(const Mission& m);

/// Navigation route from `from` to `to`: intermediate A* waypoints at transit altitude and a
/// final waypoint exactly at `to`. Throws NoPathError.
std::vector<LocalPoint> navigation_route(const OccupancyGrid& grid, const LocalPoint& from, const LocalPoint& to,
                                         double transit_altitude);

struct BaseChoice {
  std::size_t index = 0;
  std::vector<LocalPoint> route;
};

/// Euclidean-nearest base station with a reachable route; nullopt when none is reachable.
/// Stations in `avoid` are only used when no other station is reachable.
std::optional<BaseChoice> nearest_reachable_base(const OccupancyGrid& grid, const LocalPoint& from,
                                                 double transit_altitude, const std::set<std::size_t>& avoid = {});

PlanResult plan_units(const Mission& m, const std::vector<PlanningUnit>& units, const std::vector<DroneSpec>& drones,
                      const std::map<std::string, DroneStart>& starts, const WorldMap& map,
                      const PlannerConfig& cfg = {});

PlanResult plan_mission(const Mission& m, const std::vector<DroneSpec>& drones, const WorldMap& map,
                        const PlannerConfig& cfg = {});

}  // namespace cinedrone::planner
