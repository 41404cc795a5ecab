#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cinedrone/core/types.hpp"
#include "cinedrone/planner/astar.hpp"

namespace cinedrone::sched {

enum class Phase { Idle, Navigating, WaitingEvent, Shooting, Emergency, Done };
enum class EmergencyKind { LowBattery, GpsLoss };

std::string_view to_string(Phase p);
std::string_view to_string(EmergencyKind k);
std::optional<Phase> phase_from_string(std::string_view s);
std::optional<EmergencyKind> emergency_kind_from_string(std::string_view s);

struct SchedulerConfig {
  double capture_radius = 1.0;        // intermediate waypoints
  double final_capture_radius = 0.5;  // last waypoint of a route, take-off altitude
  double ground_level = 0.05;         // landed below this height
  double airborne_height = 1.0;       // a take-off is already done above this height
  double transit_altitude = 15.0;
  double cell = 2.0;
};

/// What the drone should be doing right now, as seen by the shot executor.
struct Task {
  enum class Kind { Ground, Climb, Waypoint, Hover, Shoot, Descend };
  Kind kind = Kind::Ground;
  LocalPoint target = LocalPoint::Zero();  // waypoint / hover point / landing spot
  bool final_waypoint = false;
  const ShootingAction* shot = nullptr;
  double shot_elapsed = 0.0;
};

/// Per-drone execution state machine: walks the action list, holds at shot start points
/// until the start event is latched, times shots and diverts to a base station on
/// emergencies.
class Scheduler {
 public:
  Scheduler(std::string drone_id, GeoPoint origin, const planner::OccupancyGrid* grid, SchedulerConfig cfg = {});

  /// Adopts a plan. Navigating or shooting drones finish their current action first; idle,
  /// waiting or finished drones switch immediately. Returns false (plan rejected) during an
  /// emergency. `rev` labels the plan; without it the revision counts up from the last one.
  bool adopt_plan(const DronePlan& plan, std::optional<int> rev = std::nullopt);

  /// Latches the event; a drone waiting for it starts shooting on its next tick.
  void handle_event(const Event& e);

  /// Cancels the current action and flies to the nearest reachable base to land.
  void handle_emergency(EmergencyKind kind, double now, const LocalPoint& position);

  /// Director stop: cancel the plan, return to the nearest base and land.
  void stop(double now, const LocalPoint& position);

  /// Advances the state machine at time `now` given the drone's current position.
  void tick(double now, const LocalPoint& position);

  Task task() const;

  const std::string& drone_id() const { return drone_id_; }
  const GeoPoint& origin() const { return origin_; }
  Phase phase() const { return phase_; }
  int action_index() const { return action_index_; }
  int plan_rev() const { return plan_rev_; }
  const DronePlan& plan() const { return plan_; }
  double shot_start() const { return shot_start_; }
  double shot_elapsed(double now) const { return phase_ == Phase::Shooting ? now - shot_start_ : 0.0; }
  const ShootingAction* current_shot() const;
  const std::set<std::string>& latched_events() const { return latched_; }
  std::optional<EmergencyKind> emergency_kind() const { return emergency_; }
  bool landed_in_place() const { return landed_in_place_; }
  bool has_pending_plan() const { return pending_.has_value(); }
  bool landed() const { return landed_; }
  std::optional<std::size_t> landing_base() const { return landing_base_; }

  /// Scheduler log lines since the last call ("shot_start:<id>", "event:<name>", ...).
  std::vector<std::string> drain_log();

 private:
  void begin_action(double now, const LocalPoint& position);
  void complete_action(double now, const LocalPoint& position);
  void divert_to_base(const LocalPoint& position);
  bool advance_route(const LocalPoint& position);
  std::vector<LocalPoint> to_local(const std::vector<GeoPoint>& pts) const;

  std::string drone_id_;
  GeoPoint origin_;
  const planner::OccupancyGrid* grid_;
  SchedulerConfig cfg_;

  DronePlan plan_;
  std::optional<DronePlan> pending_;
  int pending_rev_ = 0;
  int plan_rev_ = 0;
  int action_index_ = 0;
  Phase phase_ = Phase::Idle;
  std::set<std::string> latched_;
  std::optional<EmergencyKind> emergency_;
  bool stopping_ = false;

  // navigation progress for the current (or override) route
  std::vector<LocalPoint> route_;
  std::size_t route_pos_ = 0;
  enum class NavMode { None, Climb, Route, Land } nav_ = NavMode::None;
  bool land_after_route_ = false;
  LocalPoint hover_ = LocalPoint::Zero();
  LocalPoint climb_target_ = LocalPoint::Zero();
  double shot_start_ = 0.0;
  bool landed_ = true;
  bool landed_in_place_ = false;
  std::optional<std::size_t> landing_base_;
  std::vector<std::string> log_;
};

}  // namespace cinedrone::sched
