#include "cinedrone/sim/world.hpp"

#include "cinedrone/core/errors.hpp"

namespace cinedrone::sim {

World::World(WorldConfig cfg, std::vector<SimTarget> targets, std::vector<EventTrigger> triggers)
    : cfg_(cfg), triggers_(std::move(triggers)) {
  if (!(cfg_.tick_rate > 0.0) || cfg_.substeps < 1) throw ValidationError("world needs tick_rate > 0, substeps >= 1");
  std::uint64_t k = 0;
  for (auto& t : targets) sensors_.emplace_back(std::move(t), cfg_.seed * 0x9E3779B97F4A7C15ULL + (++k));
}

void World::add_drone(const std::string& id, const LocalPoint& home) {
  SimDroneState s;
  s.position = home;
  s.armed = false;
  drones_[id] = s;
}

SimDroneState& World::drone(const std::string& id) {
  auto it = drones_.find(id);
  if (it == drones_.end()) throw Error("unknown drone " + id);
  return it->second;
}

std::map<std::string, LocalPoint> World::true_target_positions() const {
  std::map<std::string, LocalPoint> out;
  for (const auto& s : sensors_) out[s.target().id] = target_position(s.target(), now());
  return out;
}

std::map<std::string, shot::TargetEstimate> World::measure_targets() {
  std::map<std::string, shot::TargetEstimate> out;
  const double t = now();
  for (auto& s : sensors_) out[s.target().id] = s.measure(t);
  return out;
}

std::vector<Event> World::poll_triggers() { return check_triggers(triggers_, true_target_positions(), now()); }

void World::step(const std::map<std::string, DroneCommand>& commands) {
  const double h = dt() / cfg_.substeps;
  for (auto& [id, state] : drones_) {
    auto it = commands.find(id);
    const DroneCommand cmd = it != commands.end() ? it->second : DroneCommand{{}, Vec3::Zero(), state.armed};
    state.armed = cmd.armed;
    for (int k = 0; k < cfg_.substeps; ++k) state = step_drone(state, cmd.velocity, cmd.gimbal_rate, h, cfg_.model);
  }
  ++tick_;
}

void TraceWriter::write(const nlohmann::json& record) {
  if (os_) *os_ << record.dump() << '\n';
}

}  // namespace cinedrone::sim
