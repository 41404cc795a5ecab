#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cinedrone/sim/drone_model.hpp"
#include "cinedrone/sim/targets.hpp"

namespace cinedrone::sim {

struct WorldConfig {
  double tick_rate = 20.0;
  int substeps = 4;
  DroneModel model;
  std::uint64_t seed = 1;
};

struct DroneCommand {
  control::VelocityCommand velocity;
  Vec3 gimbal_rate = Vec3::Zero();
  bool armed = true;
};

/// Shared simulated world on one integer tick clock (now = tick / tick_rate).
class World {
 public:
  World(WorldConfig cfg, std::vector<SimTarget> targets, std::vector<EventTrigger> triggers);

  void add_drone(const std::string& id, const LocalPoint& home);

  std::int64_t tick() const { return tick_; }
  double now() const { return static_cast<double>(tick_) / cfg_.tick_rate; }
  double dt() const { return 1.0 / cfg_.tick_rate; }
  const WorldConfig& config() const { return cfg_; }

  const std::map<std::string, SimDroneState>& drones() const { return drones_; }
  SimDroneState& drone(const std::string& id);
  const std::vector<TargetSensor>& sensors() const { return sensors_; }

  std::map<std::string, LocalPoint> true_target_positions() const;
  std::map<std::string, shot::TargetEstimate> measure_targets();
  std::vector<Event> poll_triggers();

  /// Integrates every drone over one tick in `substeps` equal steps, then advances the clock.
  void step(const std::map<std::string, DroneCommand>& commands);

 private:
  WorldConfig cfg_;
  std::int64_t tick_ = 0;
  std::map<std::string, SimDroneState> drones_;
  std::vector<TargetSensor> sensors_;
  std::vector<EventTrigger> triggers_;
};

/// Newline-delimited JSON sink.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream* os = nullptr) : os_(os) {}
  void write(const nlohmann::json& record);
  bool enabled() const { return os_ != nullptr; }

 private:
  std::ostream* os_;
};

}  // namespace cinedrone::sim
