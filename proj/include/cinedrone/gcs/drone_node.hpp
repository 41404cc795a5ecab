#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cinedrone/gcs/bus.hpp"
#include "cinedrone/sched/agent.hpp"

namespace cinedrone::gcs {

/// A drone's bus endpoint wrapped around its on-board agent. Applies PLAN, EVENT and STOP
/// from the ground station, tracks peer STATUS for avoidance, and reports its own STATUS
/// every step.
class DroneNode {
 public:
  DroneNode(std::string drone_id, GeoPoint origin, const planner::OccupancyGrid* grid, sched::AgentConfig cfg,
            LoopbackBus& bus);

  const std::string& id() const { return agent_.drone_id(); }
  sched::DroneAgent& agent() { return agent_; }
  const sched::DroneAgent& agent() const { return agent_; }

  /// Scripted or operator-injected failure, applied on the next step.
  void inject_failure(sched::EmergencyKind kind) { injected_ = kind; }

  sched::AgentOutput step(double now, double dt, const sched::Observation& obs,
                          const std::map<std::string, shot::TargetEstimate>& targets);

  const std::map<std::string, avoid::AgentState>& neighbors() const { return neighbors_; }

 private:
  void handle(const WireMessage& m, double now, const sched::Observation& obs, std::vector<std::string>& notes);

  sched::DroneAgent agent_;
  LoopbackBus& bus_;
  std::map<std::string, avoid::AgentState> neighbors_;
  std::optional<sched::EmergencyKind> injected_;
};

}  // namespace cinedrone::gcs
