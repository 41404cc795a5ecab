#pragma once

#include <cstdint>

#include "cinedrone/control/controllers.hpp"
#include "cinedrone/core/types.hpp"

namespace cinedrone::sim {

struct DroneModel {
  double a_max = 4.0;               // m/s^2
  double platform_max_speed = 10.0;  // m/s
  double flight_time_budget = 1200.0;
  int reorthonormalize_every = 100;
};

struct SimDroneState {
  LocalPoint position = LocalPoint::Zero();
  Vec3 velocity = Vec3::Zero();
  double yaw = 0.0;
  Mat3 gimbal_R = Mat3::Identity();
  double battery = 1.0;
  bool armed = true;  // battery drains only while armed
  std::uint64_t gimbal_steps = 0;
};

/// First-order velocity response: velocity slews towards the command under the acceleration
/// limit, then position, yaw and gimbal attitude are integrated over `dt`.
SimDroneState step_drone(const SimDroneState& s, const control::VelocityCommand& cmd, const Vec3& gimbal_rate,
                         double dt, const DroneModel& model = {});

/// Exact attitude update for a constant inertial angular rate.
Mat3 integrate_rotation(const Mat3& R, const Vec3& omega_inertial, double dt);

Mat3 orthonormalize(const Mat3& R);

}  // namespace cinedrone::sim
