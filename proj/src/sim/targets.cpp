#include "cinedrone/sim/targets.hpp"

#include <algorithm>
#include <cmath>

#include "cinedrone/core/errors.hpp"

namespace cinedrone::sim {

LocalPoint target_position(const SimTarget& t, double time) {
  if (t.path.empty()) return LocalPoint::Zero();
  const shot::Rail rail(t.path);
  return rail.at(t.speed * std::max(0.0, time - t.start_time)).position;
}

Vec3 target_velocity(const SimTarget& t, double time) {
  if (t.path.size() < 2 || time < t.start_time) return Vec3::Zero();
  const shot::Rail rail(t.path);
  const double s = t.speed * (time - t.start_time);
  if (s >= rail.length()) return Vec3::Zero();
  return t.speed * rail.at(s).tangent;
}

TargetSensor::TargetSensor(SimTarget target, std::uint64_t seed, double velocity_tau)
    : target_(std::move(target)), tau_(velocity_tau) {
  if (target_.speed < 0.0 || target_.report_delay < 0.0 || target_.noise_sigma < 0.0)
    throw ValidationError("target " + target_.id + " needs speed, delay and noise >= 0");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  rng_.seed(seq);
}

shot::TargetEstimate TargetSensor::measure(double now) {
  const double stamp = now - target_.report_delay;
  LocalPoint p = target_position(target_, stamp);
  if (target_.noise_sigma > 0.0)
    for (int k = 0; k < 3; ++k) p[k] += target_.noise_sigma * noise_(rng_);

  if (last_sample_ && now > last_time_) {
    const double dt = now - last_time_;
    const Vec3 raw = (p - *last_sample_) / dt;
    const double alpha = 1.0 - std::exp(-dt / tau_);
    velocity_ += alpha * (raw - velocity_);
  }
  last_sample_ = p;
  last_time_ = now;
  return {p, velocity_, stamp};
}

std::vector<Event> check_triggers(std::vector<EventTrigger>& triggers,
                                  const std::map<std::string, LocalPoint>& target_positions, double now) {
  std::vector<Event> out;
  for (auto& trig : triggers) {
    if (trig.fired) continue;
    bool fire = false;
    if (trig.kind == EventTrigger::Kind::AtTime) {
      fire = now >= trig.time - 1e-9;
    } else {
      auto it = target_positions.find(trig.target_id);
      fire = it != target_positions.end() && (it->second - trig.center).norm() <= trig.radius;
    }
    if (fire) {
      trig.fired = true;
      out.push_back({trig.name, now});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Event& a, const Event& b) { return a.name < b.name; });
  return out;
}

}  // namespace cinedrone::sim
