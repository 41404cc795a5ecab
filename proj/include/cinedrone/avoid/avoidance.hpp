#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cinedrone/control/controllers.hpp"
#include "cinedrone/core/types.hpp"

namespace cinedrone::avoid {

struct AvoidanceConfig {
  double safety_distance = 8.0;
  double horizon = 10.0;
  double roundabout_radius = 8.0;
  double roundabout_speed = 4.0;
  double radial_gain = 0.5;
  double phase_gain = 0.6;       // fraction of roundabout_speed used to spread drones around the circle
  double entry_margin = 1.0;     // the reactive layer engages below safety_distance + entry_margin
  double clear_factor = 1.5;     // exit needs no predicted conflict at clear_factor * safety_distance
  double max_state_age = 0.5;
};

struct AgentState {
  std::string id;
  LocalPoint position = LocalPoint::Zero();
  Vec3 velocity = Vec3::Zero();
  double stamp = 0.0;
};

struct ConflictWarning {
  std::string other_id;
  double time_to_conflict = 0.0;
  LocalPoint conflict_point = LocalPoint::Zero();
  LocalPoint other_position = LocalPoint::Zero();
  double min_separation = 0.0;
};

/// Constant-velocity extrapolation of every neighbor against `self` over the horizon.
/// Reports the neighbor with the earliest conflict. Throws StaleStateError when a neighbor
/// report is `max_state_age` old or older.
std::optional<ConflictWarning> detect_conflict(const AgentState& self, const std::vector<AgentState>& others,
                                               double now, const AvoidanceConfig& cfg = {});

/// Counterclockwise circling of the conflict point with a radial pull onto the circle.
/// `heading` sets the push-out direction when the drone sits on the center.
control::VelocityCommand roundabout_command(const LocalPoint& self, double heading, const ConflictWarning& w,
                                            const AvoidanceConfig& cfg = {}, double v_max = 8.0);

control::VelocityCommand arbitrate(const control::VelocityCommand& shot_cmd,
                                   const std::optional<control::VelocityCommand>& avoid_cmd);

/// Periodic avoidance evaluation for one drone. Once a conflict is detected the circling
/// point is latched until the intended motions of both drones predict no conflict with a
/// widened safety margin.
class ReactiveLayer {
 public:
  explicit ReactiveLayer(AvoidanceConfig cfg = {}) : cfg_(cfg) {}

  /// `self.velocity` and neighbor velocities are the intended (shot) velocities.
  std::optional<control::VelocityCommand> update(const AgentState& self, double heading,
                                                 const std::vector<AgentState>& others, double now,
                                                 double v_max = 8.0);

  bool active() const { return latched_.has_value(); }
  const std::optional<ConflictWarning>& warning() const { return latched_; }
  const AvoidanceConfig& config() const { return cfg_; }
  void reset() { latched_.reset(); }

 private:
  AvoidanceConfig cfg_;
  std::optional<ConflictWarning> latched_;
};

}  // namespace cinedrone::avoid
