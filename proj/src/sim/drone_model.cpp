#include "cinedrone/sim/drone_model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "cinedrone/core/errors.hpp"
#include "cinedrone/core/geo.hpp"

namespace cinedrone::sim {

Mat3 integrate_rotation(const Mat3& R, const Vec3& omega_inertial, double dt) {
  const Vec3 body = R.transpose() * omega_inertial * dt;
  const double angle = body.norm();
  if (angle == 0.0) return R;
  return R * Eigen::AngleAxisd(angle, body / angle).toRotationMatrix();
}

Mat3 orthonormalize(const Mat3& R) {
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 out = svd.matrixU() * svd.matrixV().transpose();
  if (out.determinant() < 0) {
    Mat3 U = svd.matrixU();
    U.col(2) *= -1.0;
    out = U * svd.matrixV().transpose();
  }
  return out;
}

SimDroneState step_drone(const SimDroneState& s, const control::VelocityCommand& cmd, const Vec3& gimbal_rate,
                         double dt, const DroneModel& model) {
  if (!(dt > 0.0) || dt > 0.1) throw ValidationError("step_drone needs dt in (0, 0.1]");
  SimDroneState out = s;

  const Vec3 target = control::saturate(cmd.v, model.platform_max_speed);
  const Vec3 dv = target - s.velocity;
  const double max_dv = model.a_max * dt;
  out.velocity = s.velocity + (dv.norm() > max_dv ? Vec3(dv * (max_dv / dv.norm())) : dv);
  out.velocity = control::saturate(out.velocity, model.platform_max_speed);

  out.position = s.position + out.velocity * dt;
  if (out.position.z() < 0.0) {
    out.position.z() = 0.0;
    out.velocity.z() = std::max(0.0, out.velocity.z());
  }
  out.yaw = wrap_angle(s.yaw + cmd.yaw_rate * dt);

  out.gimbal_R = integrate_rotation(s.gimbal_R, gimbal_rate, dt);
  if (++out.gimbal_steps % static_cast<std::uint64_t>(std::max(1, model.reorthonormalize_every)) == 0)
    out.gimbal_R = orthonormalize(out.gimbal_R);

  if (s.armed && model.flight_time_budget > 0.0)
    out.battery = std::max(0.0, s.battery - dt / model.flight_time_budget);
  return out;
}

}  // namespace cinedrone::sim
