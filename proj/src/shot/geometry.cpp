#include "cinedrone/shot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Geometry>

#include "cinedrone/core/errors.hpp"
#include "cinedrone/core/geo.hpp"

namespace cinedrone::shot {

Rail::Rail(std::vector<LocalPoint> points) : pts_(std::move(points)) {
  cum_.reserve(pts_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    if (i > 0) acc += (pts_[i] - pts_[i - 1]).norm();
    cum_.push_back(acc);
  }
}

double Rail::initial_heading() const {
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    const Eigen::Vector2d d = (pts_[i] - pts_[i - 1]).head<2>();
    if (d.norm() > 1e-9) return std::atan2(d.y(), d.x());
  }
  return 0.0;
}

Rail::Sample Rail::at(double s) const {
  Sample out;
  if (pts_.empty()) return out;
  out.heading = initial_heading();
  out.tangent = Vec3(std::cos(out.heading), std::sin(out.heading), 0.0);
  if (pts_.size() == 1 || length() <= 0.0) {
    out.position = pts_.front();
    return out;
  }
  s = std::clamp(s, 0.0, length());
  // last segment with positive length whose start is at or before s
  std::size_t seg = 0;
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
    if (cum_[i + 1] - cum_[i] <= 1e-12) continue;
    if (cum_[i] <= s) seg = i;
    if (cum_[i] > s) break;
  }
  while (seg + 1 < pts_.size() && cum_[seg + 1] - cum_[seg] <= 1e-12) ++seg;
  const double seg_len = cum_[seg + 1] - cum_[seg];
  const Vec3 dir = (pts_[seg + 1] - pts_[seg]) / seg_len;
  out.position = pts_[seg] + dir * std::min(s - cum_[seg], seg_len);
  out.tangent = dir;
  if (dir.head<2>().norm() > 1e-9) out.heading = std::atan2(dir.y(), dir.x());
  return out;
}

double Rail::project(const LocalPoint& p) const {
  if (pts_.size() < 2) return 0.0;
  double best_s = 0.0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
    const Vec3 ab = pts_[i + 1] - pts_[i];
    const double len2 = ab.squaredNorm();
    const double u = len2 > 0 ? std::clamp((p - pts_[i]).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const double d = (pts_[i] + u * ab - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best_s = cum_[i] + u * std::sqrt(len2);
    }
  }
  return best_s;
}

TrailerFrame rail_frame(const Rail& rail, double speed, double t) {
  const double s = speed * t;
  const auto sample = rail.at(s);
  TrailerFrame f;
  f.position = sample.position;
  f.heading = wrap_angle(sample.heading);
  const bool moving = s < rail.length() && speed > 0.0;
  f.speed = moving ? speed : 0.0;
  f.velocity = moving ? Vec3(speed * sample.tangent) : Vec3::Zero();
  return f;
}

TrailerFrame rt_frame(const ShootingAction& a, const Rail& rail, double t,
                      const std::optional<TargetEstimate>& estimate, RtState& state) {
  if (a.rt_mode == RTMode::VirtualTraj) return rail_frame(rail, a.rt_speed.value_or(0.0), t);
  if (!estimate) throw StaleTargetError("shot " + a.id + " has no target estimate");

  TrailerFrame f;
  const double speed = estimate->velocity.norm();
  if (a.rt_mode == RTMode::VirtualPath) {
    state.progress = std::max(state.progress, rail.project(estimate->position));
    const auto sample = rail.at(state.progress);
    f.position = sample.position;
    f.heading = wrap_angle(sample.heading);
    const bool moving = state.progress < rail.length();
    f.speed = moving ? speed : 0.0;
    f.velocity = moving ? Vec3(speed * sample.tangent) : Vec3::Zero();
    return f;
  }

  state.trailer = trailer_update(state.trailer, estimate->position, rail.initial_heading());
  f.position = state.trailer.trailer;
  f.heading = wrap_angle(trailer_heading(state.trailer, estimate->position));
  f.speed = speed;
  // A towed point moves with the target velocity projected on the link.
  const Vec3 u(std::cos(f.heading), std::sin(f.heading), 0.0);
  f.velocity = u * u.dot(estimate->velocity);
  f.velocity.z() = estimate->velocity.z();
  return f;
}

namespace {

double need(const std::optional<double>& v, ShotType type, const char* name) {
  if (!v) throw ValidationError(std::string(to_string(type)) + " requires " + name);
  return *v;
}

}  // namespace

double orbit_azimuth(const ShotParameters& p, double t) {
  return need(p.azimuth_s, ShotType::Orbit, "azimuth_s") + need(p.angular_speed, ShotType::Orbit, "angular_speed") * t;
}

ShotOffset shot_offset(ShotType type, const ShotParameters& p, double t, double T) {
  if (!(T > 0.0)) throw ValidationError("shot duration must be > 0");
  const double lambda = std::clamp(t / T, 0.0, 1.0);
  auto lerp = [&](const char* a, const std::optional<double>& va, const char* b, const std::optional<double>& vb) {
    const double s = need(va, type, a), e = need(vb, type, b);
    return std::pair{s + lambda * (e - s), (e - s) / T};
  };

  ShotOffset out;
  switch (type) {
    case ShotType::Static:
    case ShotType::FlyThrough: {
      out.offset = {0.0, 0.0, need(p.z_0, type, "z_0")};
      const auto [pan, pan_rate] = lerp("pan_s", p.pan_s, "pan_e", p.pan_e);
      const auto [tilt, tilt_rate] = lerp("tilt_s", p.tilt_s, "tilt_e", p.tilt_e);
      out.camera_script = PanTilt{pan, tilt};
      break;
    }
    case ShotType::Elevator: {
      const auto [z, zr] = lerp("z_s", p.z_s, "z_e", p.z_e);
      out.offset = {0.0, 0.0, z};
      out.rate = {0.0, 0.0, zr};
      break;
    }
    case ShotType::ChaseLead: {
      const auto [x, xr] = lerp("x_s", p.x_s, "x_e", p.x_e);
      out.offset = {x, 0.0, need(p.z_0, type, "z_0")};
      out.rate = {xr, 0.0, 0.0};
      break;
    }
    case ShotType::Flyby: {
      const auto [x, xr] = lerp("x_s", p.x_s, "x_e", p.x_e);
      out.offset = {x, need(p.y_0, type, "y_0"), need(p.z_0, type, "z_0")};
      out.rate = {xr, 0.0, 0.0};
      break;
    }
    case ShotType::Lateral:
      out.offset = {0.0, need(p.y_0, type, "y_0"), need(p.z_0, type, "z_0")};
      break;
    case ShotType::Establish: {
      const auto [x, xr] = lerp("x_s", p.x_s, "x_e", p.x_e);
      const auto [z, zr] = lerp("z_s", p.z_s, "z_e", p.z_e);
      out.offset = {x, 0.0, z};
      out.rate = {xr, 0.0, zr};
      break;
    }
    case ShotType::Orbit: {
      const double r = need(p.r_0, type, "r_0");
      const double w = need(p.angular_speed, type, "angular_speed");
      const double az = orbit_azimuth(p, std::clamp(t, 0.0, T));
      out.offset = {r * std::cos(az), r * std::sin(az), need(p.z_0, type, "z_0")};
      out.rate = {-r * w * std::sin(az), r * w * std::cos(az), 0.0};
      break;
    }
  }
  return out;
}

Mat3 rot_z(double yaw) { return Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix(); }

ReferenceSetpoint reference_setpoint(const ShootingAction& a, const TrailerFrame& frame, double t,
                                     const std::optional<LocalPoint>& st_position, const SetpointConfig& cfg) {
  const ShotOffset off = shot_offset(a.shot_type, a.params, t, a.duration);
  const Mat3 R = rot_z(frame.heading);

  ReferenceSetpoint sp;
  sp.position = frame.position + R * off.offset;
  sp.velocity_ff = frame.velocity + R * off.rate;
  const double n = sp.velocity_ff.norm();
  if (n > cfg.max_ref_speed && n > 0.0) sp.velocity_ff *= cfg.max_ref_speed / n;

  switch (a.shot_type) {
    case ShotType::ChaseLead:
    case ShotType::Lateral:
    case ShotType::Flyby:
    case ShotType::Establish:
      sp.yaw = frame.heading;
      break;
    case ShotType::Orbit:
      sp.yaw = wrap_angle(frame.heading + orbit_azimuth(a.params, std::clamp(t, 0.0, a.duration)) + std::numbers::pi);
      break;
    case ShotType::Static:
    case ShotType::FlyThrough:
    case ShotType::Elevator: {
      sp.yaw = frame.heading;
      if (st_position && a.st_type != STType::None) {
        const Eigen::Vector2d look = st_position->head<2>() - sp.position.head<2>();
        if (look.norm() > 0.5) sp.yaw = std::atan2(look.y(), look.x());
      }
      break;
    }
  }
  sp.yaw = wrap_angle(sp.yaw);
  if (a.st_type == STType::None) sp.camera_script = off.camera_script;
  return sp;
}

}  // namespace cinedrone::shot
