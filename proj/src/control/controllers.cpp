#include "cinedrone/control/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Geometry>

#include "cinedrone/core/errors.hpp"
#include "cinedrone/core/geo.hpp"

namespace cinedrone::control {

Vec3 saturate(const Vec3& v, double limit) {
  const double n = v.norm();
  if (n <= limit || n == 0.0) return v;
  return v * (limit / n);
}

VelocityCommand velocity_command(const Pose& pose, const LocalPoint& target, double target_yaw, const Vec3& ff,
                                 const ControllerGains& g) {
  VelocityCommand cmd;
  cmd.v = saturate(g.K_p * (target - pose.position) + ff, g.v_max);
  cmd.yaw_rate = std::clamp(g.K_yaw * wrap_angle(target_yaw - pose.yaw), -g.yaw_rate_max, g.yaw_rate_max);
  return cmd;
}

VelocityCommand velocity_command(const Pose& pose, const shot::ReferenceSetpoint& sp, const ControllerGains& g) {
  return velocity_command(pose, sp.position, sp.yaw, sp.velocity_ff, g);
}

Mat3 desired_camera_rotation(const LocalPoint& drone, const LocalPoint& st) {
  const Vec3 los = st - drone;
  const double dist = los.norm();
  if (dist <= 0.1) throw SingularError("shooting target coincides with the drone");
  const Vec3 f = los / dist;
  const Vec3 side = f.cross(Vec3::UnitZ());
  // |f x up| = sin of the angle to the vertical
  if (side.norm() < std::sin(deg2rad(1.0))) throw SingularError("look direction is vertical");
  const Vec3 r = side.normalized();
  Mat3 R;
  R.col(0) = f;
  R.col(1) = r;
  R.col(2) = f.cross(r);
  return R;
}

Mat3 pan_tilt_rotation(double pan, double tilt) {
  const Vec3 f(std::cos(tilt) * std::cos(pan), std::cos(tilt) * std::sin(pan), std::sin(tilt));
  const Vec3 r(std::sin(pan), -std::cos(pan), 0.0);
  Mat3 R;
  R.col(0) = f;
  R.col(1) = r;
  R.col(2) = f.cross(r);
  return R;
}

shot::PanTilt scripted_gimbal(const ShotParameters& p, double t, double T) {
  if (!p.pan_s || !p.pan_e || !p.tilt_s || !p.tilt_e) throw ValidationError("scripted gimbal requires pan/tilt angles");
  if (!(T > 0.0)) throw ValidationError("shot duration must be > 0");
  const double lambda = std::clamp(t / T, 0.0, 1.0);
  return {*p.pan_s + lambda * (*p.pan_e - *p.pan_s), *p.tilt_s + lambda * (*p.tilt_e - *p.tilt_s)};
}

Vec3 vee(const Mat3& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

Mat3 skew(const Vec3& w) {
  Mat3 m;
  m << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return m;
}

Vec3 rotation_error(const Mat3& R, const Mat3& R_d) { return 0.5 * vee(R_d.transpose() * R - R.transpose() * R_d); }

GimbalRate gimbal_rate_command(const Mat3& R, const Mat3& R_d, const GimbalControllerState& s, double dt) {
  GimbalRate out;
  out.state = s;
  const Vec3 e = rotation_error(R, R_d);
  out.state.integral = saturate(s.integral + e * dt, s.integral_bound);
  out.omega = saturate(-R * (s.k_R * e + s.k_I * out.state.integral), s.rate_limit);
  return out;
}

double rotation_angle_between(const Mat3& R, const Mat3& R_d) {
  const double c = std::clamp(((R_d.transpose() * R).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

std::string_view to_string(CameraCommand c) {
  switch (c) {
    case CameraCommand::RecordStart: return "RecordStart";
    case CameraCommand::RecordStop: return "RecordStop";
    case CameraCommand::Autofocus: return "Autofocus";
    case CameraCommand::SetZoom: return "SetZoom";
    case CameraCommand::SetISO: return "SetISO";
    case CameraCommand::SetWhiteBalance: return "SetWhiteBalance";
  }
  return "?";
}

std::string format_camera_line(const CameraLogEntry& e) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "t=%.3f cam=%s cmd=%s value=%g", e.t, e.camera_id.c_str(),
                std::string(to_string(e.cmd)).c_str(), e.value);
  return buf;
}

bool CameraLog::command(double t, std::string camera_id, CameraCommand cmd, double value) {
  entries_.push_back({t, std::move(camera_id), cmd, value});
  return true;
}

void CameraLog::write(std::ostream& os) const {
  for (const auto& e : entries_) os << format_camera_line(e) << '\n';
}

}  // namespace cinedrone::control
