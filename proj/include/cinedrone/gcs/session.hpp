#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cinedrone/gcs/bus.hpp"
#include "cinedrone/gcs/controller.hpp"
#include "cinedrone/gcs/dash_state.hpp"
#include "cinedrone/gcs/drone_node.hpp"
#include "cinedrone/planner/astar.hpp"
#include "cinedrone/sim/world.hpp"

namespace cinedrone::gcs {

struct ScriptedFire {
  std::string name;
  double t = 0.0;
};

struct ScriptedFailure {
  std::string drone_id;
  sched::EmergencyKind kind = sched::EmergencyKind::LowBattery;
  double t = 0.0;
};

struct SessionConfig {
  sim::WorldConfig world;
  sched::AgentConfig agent;
  ControllerConfig controller;
  bool fuzz_bus = false;
  std::uint64_t fuzz_seed = 0;
  std::vector<ScriptedFire> fires;
  std::vector<ScriptedFailure> failures;
  bool keep_records = true;
};

/// Everything for one simulated mission: world, bus, controller and drone nodes, advanced
/// in lock step. Each tick runs scripted inputs, world triggers, operator commands, the
/// controller, then every drone in id order, records the trace and integrates the world.
class Session {
 public:
  Session(Mission mission, planner::WorldMap map, std::vector<planner::DroneSpec> drones,
          std::vector<sim::SimTarget> targets, std::vector<sim::EventTrigger> triggers, SessionConfig cfg = {},
          std::ostream* trace = nullptr);

  /// Starts the mission at t = 0; returns the refusal reasons (empty when running).
  std::vector<std::string> start();

  void tick();

  /// Ticks until every drone has landed for good or `max_time` is reached. Returns the
  /// final time.
  double run(double max_time);

  bool finished() const;
  double now() const { return world_.now(); }

  /// Operator commands (validated DASH_CMD messages) are pulled from here each tick.
  void set_command_source(std::function<std::vector<WireMessage>()> fn) { commands_ = std::move(fn); }
  /// Sees every bus message and every DASH_STATE, in publication order.
  void set_tap(std::function<void(const WireMessage&)> fn) { tap_ = std::move(fn); }

  void apply_command(const WireMessage& cmd);

  sim::World& world() { return world_; }
  LoopbackBus& bus() { return bus_; }
  MissionController& controller() { return controller_; }
  const MissionController& controller() const { return controller_; }
  DroneNode& node(const std::string& id);
  const std::map<std::string, std::unique_ptr<DroneNode>>& nodes() const { return nodes_; }
  const planner::OccupancyGrid& grid() const { return grid_; }

  const std::vector<Json>& records() const { return records_; }
  const std::vector<Json>& dash_states() const { return dash_states_; }
  const std::vector<WireMessage>& dashboard_inbox() const { return dashboard_inbox_; }

 private:
  void on_message(const WireMessage& m);
  void record(Json r);

  SessionConfig cfg_;
  planner::WorldMap map_;
  planner::OccupancyGrid grid_;
  sim::World world_;
  LoopbackBus bus_;
  MissionController controller_;
  std::map<std::string, std::unique_ptr<DroneNode>> nodes_;
  sim::TraceWriter trace_;
  DashStateBuilder dash_;
  std::vector<Json> records_;
  std::vector<Json> dash_states_;
  std::vector<WireMessage> dashboard_inbox_;
  std::vector<Json> tick_records_;
  std::function<std::vector<WireMessage>()> commands_;
  std::function<void(const WireMessage&)> tap_;
  std::size_t next_fire_ = 0;
  std::size_t next_failure_ = 0;
};

}  // namespace cinedrone::gcs
