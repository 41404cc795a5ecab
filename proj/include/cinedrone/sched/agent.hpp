#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cinedrone/avoid/avoidance.hpp"
#include "cinedrone/control/controllers.hpp"
#include "cinedrone/sched/scheduler.hpp"
#include "cinedrone/shot/geometry.hpp"

namespace cinedrone::sched {

struct AgentConfig {
  control::ControllerGains shot_gains;
  double max_speed = 6.0;  // navigation cruise speed
  double land_speed = 1.5;
  control::GimbalControllerState gimbal;
  avoid::AvoidanceConfig avoidance;
  bool avoidance_enabled = true;
  shot::SetpointConfig setpoint;
  double trailer_link = 3.0;
  double stale_target_timeout = 3.0;
  double low_battery = 0.15;
  SchedulerConfig scheduler;
};

/// Drone state as measured on board.
struct Observation {
  LocalPoint position = LocalPoint::Zero();
  Vec3 velocity = Vec3::Zero();
  double yaw = 0.0;
  Mat3 gimbal_R = Mat3::Identity();
  double battery = 1.0;
};

struct AgentOutput {
  control::VelocityCommand cmd;
  Vec3 gimbal_rate = Vec3::Zero();
  LocalPoint setpoint = LocalPoint::Zero();
  Vec3 intent_velocity = Vec3::Zero();  // shot/navigation command before avoidance
  bool avoiding = false;
  std::vector<std::string> log;
  std::optional<EmergencyKind> emergency_raised;
};

/// One drone's on-board stack: scheduler, shot executor, gimbal pointing and the reactive
/// avoidance layer, which always overrides the executor while a conflict is active.
class DroneAgent {
 public:
  DroneAgent(std::string drone_id, GeoPoint origin, const planner::OccupancyGrid* grid, AgentConfig cfg = {});

  Scheduler& scheduler() { return sched_; }
  const Scheduler& scheduler() const { return sched_; }
  const AgentConfig& config() const { return cfg_; }
  const control::CameraLog& camera_log() const { return camera_; }
  const std::string& drone_id() const { return sched_.drone_id(); }
  const Mat3& desired_camera() const { return R_d_; }

  /// Emergency raised from outside the agent (failure injection, ground station).
  void raise_emergency(EmergencyKind kind, double now, const Observation& obs);

  /// `targets` are the latest target measurements keyed by target id; `neighbors` the latest
  /// status of the other drones (intended velocities).
  AgentOutput step(double now, double dt, const Observation& obs,
                   const std::map<std::string, shot::TargetEstimate>& targets,
                   const std::vector<avoid::AgentState>& neighbors);

 private:
  void start_shot(const ShootingAction& shot, double now);
  std::optional<shot::TargetEstimate> fresh_estimate(const std::map<std::string, shot::TargetEstimate>& targets,
                                                     const std::optional<std::string>& id, double now) const;

  Scheduler sched_;
  AgentConfig cfg_;
  avoid::ReactiveLayer layer_;
  control::CameraLog camera_;
  control::GimbalControllerState gimbal_;
  Mat3 R_d_ = Mat3::Identity();

  // shot executor state
  std::string exec_shot_;
  double exec_start_ = -1.0;
  shot::Rail rail_;
  shot::RtState rt_;
  std::optional<LocalPoint> last_setpoint_;
  double last_yaw_sp_ = 0.0;
  double stale_since_ = -1.0;
  bool was_avoiding_ = false;
  std::vector<std::string> pending_log_;
};

}  // namespace cinedrone::sched
