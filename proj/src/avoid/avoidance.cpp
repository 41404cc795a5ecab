#include "cinedrone/avoid/avoidance.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "cinedrone/core/errors.hpp"

namespace cinedrone::avoid {
namespace {

std::optional<ConflictWarning> pair_conflict(const AgentState& self, const AgentState& other, double safety,
                                             double horizon) {
  const Vec3 p = other.position - self.position;
  const Vec3 v = other.velocity - self.velocity;
  const double vv = v.squaredNorm();
  double t_star = 0.0;
  if (vv > 0.0) t_star = std::clamp(-p.dot(v) / vv, 0.0, horizon);
  const double d_min = (p + v * t_star).norm();
  if (!(d_min < safety)) return std::nullopt;

  ConflictWarning w;
  w.other_id = other.id;
  w.min_separation = d_min;
  w.other_position = other.position;
  const double c = p.squaredNorm() - safety * safety;
  if (c <= 0.0 || vv == 0.0) {
    w.time_to_conflict = 0.0;
  } else {
    const double b = 2.0 * p.dot(v);
    const double disc = std::max(0.0, b * b - 4.0 * vv * c);
    w.time_to_conflict = std::max(0.0, (-b - std::sqrt(disc)) / (2.0 * vv));
  }
  w.conflict_point = 0.5 * ((self.position + self.velocity * t_star) + (other.position + other.velocity * t_star));
  return w;
}

}  // namespace

std::optional<ConflictWarning> detect_conflict(const AgentState& self, const std::vector<AgentState>& others,
                                               double now, const AvoidanceConfig& cfg) {
  std::optional<ConflictWarning> best;
  for (const auto& o : others) {
    if (o.id == self.id) continue;
    if (now - o.stamp >= cfg.max_state_age) throw StaleStateError("state of " + o.id + " is stale");
    auto w = pair_conflict(self, o, cfg.safety_distance, cfg.horizon);
    if (!w) continue;
    if (!best || std::tie(w->time_to_conflict, w->min_separation, w->other_id) <
                     std::tie(best->time_to_conflict, best->min_separation, best->other_id))
      best = std::move(w);
  }
  return best;
}

control::VelocityCommand roundabout_command(const LocalPoint& self, double heading, const ConflictWarning& w,
                                            const AvoidanceConfig& cfg, double v_max) {
  const Eigen::Vector2d rel = (self - w.conflict_point).head<2>();
  const double r = rel.norm();
  const Eigen::Vector2d u = r > 1e-6 ? Eigen::Vector2d(rel / r) : Eigen::Vector2d(std::cos(heading), std::sin(heading));
  const Eigen::Vector2d tangent(-u.y(), u.x());

  double speed = cfg.roundabout_speed;
  const Eigen::Vector2d rel_other = (w.other_position - w.conflict_point).head<2>();
  if (r > 1e-6 && rel_other.norm() > 1e-6) {
    const double theta = std::atan2(u.y(), u.x());
    const double theta_other = std::atan2(rel_other.y(), rel_other.x());
    speed *= 1.0 + cfg.phase_gain * std::sin(theta - theta_other);
  }
  const Eigen::Vector2d v2 = speed * tangent + cfg.radial_gain * (cfg.roundabout_radius - r) * u;

  control::VelocityCommand cmd;
  cmd.v = control::saturate(Vec3(v2.x(), v2.y(), 0.0), v_max);
  return cmd;
}

control::VelocityCommand arbitrate(const control::VelocityCommand& shot_cmd,
                                   const std::optional<control::VelocityCommand>& avoid_cmd) {
  return avoid_cmd ? *avoid_cmd : shot_cmd;
}

std::optional<control::VelocityCommand> ReactiveLayer::update(const AgentState& self, double heading,
                                                              const std::vector<AgentState>& others, double now,
                                                              double v_max) {
  std::optional<ConflictWarning> w;
  AvoidanceConfig probe = cfg_;
  probe.safety_distance = latched_ ? cfg_.safety_distance * cfg_.clear_factor : cfg_.safety_distance + cfg_.entry_margin;
  try {
    w = detect_conflict(self, others, now, probe);
  } catch (const StaleStateError&) {
    // fail-safe: an unknown neighbor state counts as a conflict around the last known position
    for (const auto& o : others) {
      if (o.id == self.id || now - o.stamp < cfg_.max_state_age) continue;
      ConflictWarning s;
      s.other_id = o.id;
      s.other_position = o.position;
      s.conflict_point = 0.5 * (self.position + o.position);
      s.min_separation = (o.position - self.position).norm();
      w = s;
      break;
    }
  }

  if (!latched_) {
    if (!w) return std::nullopt;
    latched_ = w;
  } else if (!w) {
    latched_.reset();
    return std::nullopt;
  }
  for (const auto& o : others)
    if (o.id == latched_->other_id) latched_->other_position = o.position;
  return roundabout_command(self.position, heading, *latched_, cfg_, v_max);
}

}  // namespace cinedrone::avoid
