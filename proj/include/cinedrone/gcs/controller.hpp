#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cinedrone/core/types.hpp"
#include "cinedrone/core/validation.hpp"
#include "cinedrone/gcs/bus.hpp"
#include "cinedrone/planner/planner.hpp"
#include "cinedrone/sched/scheduler.hpp"

namespace cinedrone::gcs {

inline constexpr const char* kControllerName = "gcs";
inline constexpr const char* kDashboardName = "dashboard";

/// Last STATUS seen from a drone.
struct DroneStatus {
  std::string drone_id;
  sched::Phase phase = sched::Phase::Idle;
  int action_index = 0;
  int plan_rev = 0;
  LocalPoint position = LocalPoint::Zero();
  double battery = 1.0;
  double t = 0.0;
  std::optional<std::string> shot_id;
};

DroneStatus status_from_payload(const Json& payload);

struct FiredEvent {
  std::string name;
  double t = 0.0;
  std::string source;
  bool duplicate = false;
};

/// Inputs and outcome of one re-planning round, kept so an offline planner run can be
/// compared against it.
struct ReplanRecord {
  double t = 0.0;
  std::vector<std::string> failed;           // all failed drones at this point
  std::vector<std::string> newly_failed;
  std::vector<planner::DroneSpec> healthy;   // planner input order
  std::vector<std::string> remaining;        // shot ids handed to the planner
  std::vector<planner::PlanningUnit> units;
  std::map<std::string, planner::DroneStart> starts;
  bool replanned = false;                    // false: notice only
  planner::PlanResult result;
};

struct ControllerConfig {
  planner::PlannerConfig planner;
  double land_speed = 1.5;
};

class MissionController {
 public:
  MissionController(Mission mission, planner::WorldMap map, std::vector<planner::DroneSpec> drones, LoopbackBus& bus,
                    ControllerConfig cfg = {});

  /// Validates, plans and dispatches one PLAN per drone. Returns the reasons for refusing;
  /// empty means the mission is running.
  std::vector<std::string> start(double now);

  /// Records the event and sends EVENT to every non-failed drone and the dashboard.
  void fire_event(const std::string& name, const std::string& source, double now);

  /// STOP for one drone, or for all of them.
  void stop(const std::optional<std::string>& drone_id, double now);

  /// Processes the inbox, then runs at most one re-plan for all failures seen this tick.
  void tick(double now);

  bool running() const { return running_; }
  bool mission_failed() const { return mission_failed_; }
  const Mission& mission() const { return mission_; }
  const planner::WorldMap& map() const { return map_; }
  const std::vector<planner::DroneSpec>& drones() const { return drones_; }
  const planner::PlanResult& initial_result() const { return initial_; }
  const std::map<std::string, DronePlan>& plans() const { return plans_; }
  int plan_rev(const std::string& drone_id) const;
  const std::map<std::string, DroneStatus>& statuses() const { return statuses_; }
  const std::set<std::string>& failed() const { return failed_; }
  const std::vector<FiredEvent>& fired_events() const { return fired_; }
  const std::set<std::string>& completed_shots() const { return completed_; }
  const std::vector<ReplanRecord>& replans() const { return replans_; }
  const std::vector<std::string>& log() const { return log_; }

 private:
  struct Executing {
    std::string shot_id;
    int rev = 0;
    int index = 0;
    double start = 0.0;
  };

  void send_plan(const std::string& drone_id, DronePlan plan);
  void on_status(const DroneStatus& s);
  void mark_failed(const std::string& drone_id, double now);
  void replan(double now);
  bool has_pending_shots(const std::string& drone_id) const;
  planner::DroneStart predict_start(const std::string& drone_id, double now) const;
  const DronePlan* plan_at(const std::string& drone_id, int rev) const;
  std::vector<std::string> live_recipients() const;

  Mission mission_;
  planner::WorldMap map_;
  std::vector<planner::DroneSpec> drones_;
  LoopbackBus& bus_;
  ControllerConfig cfg_;

  bool running_ = false;
  bool mission_failed_ = false;
  planner::PlanResult initial_;
  std::map<std::string, DronePlan> plans_;
  std::map<std::string, int> revs_;
  std::map<std::string, std::map<int, DronePlan>> history_;
  std::map<std::string, DroneStatus> statuses_;
  std::map<std::string, Executing> executing_;
  std::set<std::string> failed_;
  std::set<std::string> stopped_;
  std::vector<std::string> fresh_failures_;
  std::vector<FiredEvent> fired_;
  std::set<std::string> completed_;
  std::vector<ReplanRecord> replans_;
  std::vector<std::string> log_;
};

}  // namespace cinedrone::gcs
