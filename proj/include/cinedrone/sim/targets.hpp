#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cinedrone/core/types.hpp"
#include "cinedrone/shot/geometry.hpp"

namespace cinedrone::sim {

struct SimTarget {
  std::string id;
  std::vector<LocalPoint> path;
  double speed = 0.0;
  double noise_sigma = 0.05;
  double report_delay = 0.1;
  double start_time = 0.0;  // the target waits at the first vertex until then
};

/// True position/velocity at time `t`: constant speed along the path, holding the end.
LocalPoint target_position(const SimTarget& t, double time);
Vec3 target_velocity(const SimTarget& t, double time);

/// Seeded GPS-like tracker for one target: delayed true position plus Gaussian noise, and a
/// velocity from finite differences of the noisy samples through a first-order low-pass.
class TargetSensor {
 public:
  TargetSensor(SimTarget target, std::uint64_t seed, double velocity_tau = 0.5);

  shot::TargetEstimate measure(double now);
  const SimTarget& target() const { return target_; }

 private:
  SimTarget target_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  double tau_;
  std::optional<LocalPoint> last_sample_;
  double last_time_ = 0.0;
  Vec3 velocity_ = Vec3::Zero();
};

struct EventTrigger {
  enum class Kind { AtTime, TargetInRegion };
  std::string name;
  Kind kind = Kind::AtTime;
  double time = 0.0;
  std::string target_id;
  LocalPoint center = LocalPoint::Zero();
  double radius = 1.0;
  bool fired = false;
};

/// Fires each trigger at most once; same-tick events come out in name order.
std::vector<Event> check_triggers(std::vector<EventTrigger>& triggers,
                                  const std::map<std::string, LocalPoint>& target_positions, double now);

}  // namespace cinedrone::sim
