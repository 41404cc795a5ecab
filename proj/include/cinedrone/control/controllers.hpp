#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cinedrone/core/types.hpp"
#include "cinedrone/shot/geometry.hpp"

namespace cinedrone::control {

struct VelocityCommand {
  Vec3 v = Vec3::Zero();
  double yaw_rate = 0.0;
};

struct ControllerGains {
  double K_p = 0.8;
  double K_yaw = 1.5;
  double v_max = 8.0;
  double yaw_rate_max = 1.0;
};

struct Pose {
  LocalPoint position = LocalPoint::Zero();
  double yaw = 0.0;
};

/// Scales `v` down uniformly so that |v| <= limit.
Vec3 saturate(const Vec3& v, double limit);

/// Saturated proportional position/yaw control with a feedforward velocity.
VelocityCommand velocity_command(const Pose& pose, const shot::ReferenceSetpoint& sp, const ControllerGains& g = {});
/// Same law on bare position/yaw/feedforward (navigation and hover use this).
VelocityCommand velocity_command(const Pose& pose, const LocalPoint& target, double target_yaw, const Vec3& ff,
                                 const ControllerGains& g = {});

/// Camera rotation with columns [f r d]: optical axis towards `st`, image-right horizontal.
/// Throws SingularError for near-coincident points or a near-vertical look direction.
Mat3 desired_camera_rotation(const LocalPoint& drone, const LocalPoint& st);

/// Camera rotation for pan (yaw) and tilt (pitch, positive up) with zero roll.
Mat3 pan_tilt_rotation(double pan, double tilt);

/// Linear pan/tilt script between the shot's start and end angles.
shot::PanTilt scripted_gimbal(const ShotParameters& p, double t, double T);

struct GimbalControllerState {
  Vec3 integral = Vec3::Zero();
  double k_R = 4.0;
  double k_I = 0.5;
  double rate_limit = 2.0;
  double integral_bound = 0.5;
};

Vec3 vee(const Mat3& m);
Mat3 skew(const Vec3& w);

/// Rotation error e = vee(R_d^T R - R^T R_d)/2.
Vec3 rotation_error(const Mat3& R, const Mat3& R_d);

struct GimbalRate {
  Vec3 omega = Vec3::Zero();  // inertial frame
  GimbalControllerState state;
};

GimbalRate gimbal_rate_command(const Mat3& R, const Mat3& R_d, const GimbalControllerState& s, double dt);

/// Angle of the rotation R_d^T R, in radians.
double rotation_angle_between(const Mat3& R, const Mat3& R_d);

enum class CameraCommand { RecordStart, RecordStop, Autofocus, SetZoom, SetISO, SetWhiteBalance };
std::string_view to_string(CameraCommand c);

struct CameraLogEntry {
  double t = 0.0;
  std::string camera_id;
  CameraCommand cmd = CameraCommand::RecordStart;
  double value = 0.0;
};

/// Stub camera: commands only leave a timestamped line in the log.
class CameraLog {
 public:
  bool command(double t, std::string camera_id, CameraCommand cmd, double value = 0.0);
  const std::vector<CameraLogEntry>& entries() const { return entries_; }
  void write(std::ostream& os) const;

 private:
  std::vector<CameraLogEntry> entries_;
};

std::string format_camera_line(const CameraLogEntry& e);

}  // namespace cinedrone::control
