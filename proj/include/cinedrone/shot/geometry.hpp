#pragma once

#include <optional>
#include <vector>

#include "cinedrone/core/types.hpp"
#include "cinedrone/shot/trailer.hpp"

namespace cinedrone::shot {

/// Polyline parameterized by arc length. Zero-length segments are ignored for tangents.
class Rail {
 public:
  Rail() = default;
  explicit Rail(std::vector<LocalPoint> points);

  struct Sample {
    LocalPoint position = LocalPoint::Zero();
    Vec3 tangent = Vec3::UnitX();  // unit, 3D
    double heading = 0.0;          // yaw of the horizontal tangent
  };

  double length() const { return cum_.empty() ? 0.0 : cum_.back(); }
  bool empty() const { return pts_.empty(); }
  const std::vector<LocalPoint>& points() const { return pts_; }

  /// Point at arc length `s`, clamped to [0, length].
  Sample at(double s) const;
  /// Arc length of the closest rail point to `p`.
  double project(const LocalPoint& p) const;
  /// Direction of the first non-degenerate segment, east when there is none.
  double initial_heading() const;

 private:
  std::vector<LocalPoint> pts_;
  std::vector<double> cum_;
};

struct TrailerFrame {
  LocalPoint position = LocalPoint::Zero();
  double heading = 0.0;  // (-pi, pi]
  double speed = 0.0;    // frame advance rate
  Vec3 velocity = Vec3::Zero();
};

struct TargetEstimate {
  LocalPoint position = LocalPoint::Zero();
  Vec3 velocity = Vec3::Zero();
  double stamp = 0.0;
};

/// Mutable part of the reference frame owned by one shot execution.
struct RtState {
  TrailerState trailer;
  double progress = 0.0;  // arc length reached on the rail (virtual_path)
};

/// Reference frame at shot time `t`. virtual_traj advances along the rail at rt_speed;
/// virtual_path slides along the rail following the projection of the real target and never
/// moves backward; actual_target drags a trailer behind the target estimate.
/// Throws StaleTargetError when the mode needs an estimate and none is given.
TrailerFrame rt_frame(const ShootingAction& a, const Rail& rail, double t,
                      const std::optional<TargetEstimate>& estimate, RtState& state);

/// Frame of a virtual rail traversed at constant `speed`; used for planning estimates.
TrailerFrame rail_frame(const Rail& rail, double speed, double t);

struct PanTilt {
  double pan = 0.0;
  double tilt = 0.0;
};

struct ShotOffset {
  Vec3 offset = Vec3::Zero();  // trailer frame: x ahead, y left, z up
  Vec3 rate = Vec3::Zero();    // d(offset)/dt in the trailer frame
  std::optional<PanTilt> camera_script;
};

ShotOffset shot_offset(ShotType type, const ShotParameters& p, double t, double T);

/// Orbit azimuth at shot time `t` (trailer frame, counterclockwise from the travel axis).
double orbit_azimuth(const ShotParameters& p, double t);

struct ReferenceSetpoint {
  LocalPoint position = LocalPoint::Zero();
  double yaw = 0.0;
  Vec3 velocity_ff = Vec3::Zero();
  std::optional<PanTilt> camera_script;  // only for shots without a shooting target
};

struct SetpointConfig {
  double max_ref_speed = 8.0;
};

Mat3 rot_z(double yaw);

/// Desired drone pose for shot time `t` given the reference frame. `st_position` is the
/// shooting target location when there is one; static, fly_through and elevator shots turn
/// to face it horizontally.
ReferenceSetpoint reference_setpoint(const ShootingAction& a, const TrailerFrame& frame, double t,
                                     const std::optional<LocalPoint>& st_position,
                                     const SetpointConfig& cfg = {});

}  // namespace cinedrone::shot
