#pragma once

#include <string>
#include <vector>

#include "cinedrone/core/mission_io.hpp"
#include "cinedrone/planner/planner.hpp"
#include "cinedrone/sim/targets.hpp"

namespace cinedrone::gcs {

struct WorldSetup {
  std::vector<sim::SimTarget> targets;
  std::vector<sim::EventTrigger> triggers;
};

/// World implied by the mission alone: an AtTime trigger per event estimate, and one
/// simulated target per tracked id, moving along the referencing shot's rail at its
/// rt_speed from the shot's estimated start.
WorldSetup default_world(const Mission& m);

/// World file (local coordinates):
/// {"targets": [{"id", "path": [{x,y,z}...], "speed", "noise_sigma"?, "report_delay"?, "start_time"?}],
///  "triggers": [{"name", "at"} | {"name", "target_id", "center": {x,y,z}, "radius"}]}
WorldSetup world_from_json(const Json& j);
WorldSetup load_world_file(const std::string& filename);

/// `n` drones named d1..dn with homes on the base stations in turn; drones sharing a
/// station are spaced 15 m apart along x.
std::vector<planner::DroneSpec> make_drones(const planner::WorldMap& map, int n, double max_speed = 6.0,
                                            double flight_time_budget = 1200.0);

}  // namespace cinedrone::gcs
