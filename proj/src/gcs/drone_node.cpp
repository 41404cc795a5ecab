#include "cinedrone/gcs/drone_node.hpp"

#include "cinedrone/gcs/controller.hpp"

namespace cinedrone::gcs {

DroneNode::DroneNode(std::string drone_id, GeoPoint origin, const planner::OccupancyGrid* grid, sched::AgentConfig cfg,
                     LoopbackBus& bus)
    : agent_(std::move(drone_id), origin, grid, cfg), bus_(bus) {
  bus_.connect(id());
}

void DroneNode::handle(const WireMessage& m, double now, const sched::Observation& obs,
                       std::vector<std::string>& notes) {
  auto& sched = agent_.scheduler();
  switch (m.type) {
    case MsgType::PLAN: {
      if (m.payload["drone_id"] != id()) return;
      Json body = m.payload;
      std::optional<int> rev;
      if (body.contains("rev")) {
        rev = body["rev"].get<int>();
        body.erase("rev");
      }
      const DronePlan plan = plan_from_json(body, "/payload");
      if (!sched.adopt_plan(plan, rev)) notes.push_back("plan_rejected:" + std::to_string(rev.value_or(0)));
      break;
    }
    case MsgType::EVENT:
      sched.handle_event(Event{m.payload["name"].get<std::string>(), m.payload["t"].get<double>()});
      break;
    case MsgType::STOP:
      if (!m.payload.contains("drone_id") || m.payload["drone_id"] == id()) sched.stop(now, obs.position);
      break;
    case MsgType::STATUS: {
      const auto& p = m.payload;
      const std::string other = p["drone_id"].get<std::string>();
      if (other == id()) return;
      avoid::AgentState s;
      s.id = other;
      s.position = local_from_json(p["position"], "/payload/position");
      s.velocity = p.contains("intent_velocity") ? local_from_json(p["intent_velocity"], "/payload/intent_velocity")
                                                 : Vec3::Zero();
      s.stamp = p["t"].get<double>();
      neighbors_[other] = s;
      break;
    }
    default:
      break;
  }
}

sched::AgentOutput DroneNode::step(double now, double dt, const sched::Observation& obs,
                                   const std::map<std::string, shot::TargetEstimate>& targets) {
  std::vector<std::string> notes;
  for (const auto& m : bus_.poll(id())) handle(m, now, obs, notes);

  bool emergency_sent = false;
  if (injected_) {
    const bool was = agent_.scheduler().phase() == sched::Phase::Emergency;
    agent_.raise_emergency(*injected_, now, obs);
    if (!was) {
      bus_.publish(id(), MsgType::EMERGENCY,
                   Json{{"drone_id", id()}, {"kind", std::string(sched::to_string(*injected_))}, {"t", now}},
                   {kControllerName, kDashboardName});
      emergency_sent = true;
    }
    injected_.reset();
  }

  std::vector<avoid::AgentState> peers;
  peers.reserve(neighbors_.size());
  for (const auto& [_, s] : neighbors_) peers.push_back(s);
  sched::AgentOutput out = agent_.step(now, dt, obs, targets, peers);

  if (out.emergency_raised && !emergency_sent) {
    bus_.publish(id(), MsgType::EMERGENCY,
                 Json{{"drone_id", id()}, {"kind", std::string(sched::to_string(*out.emergency_raised))}, {"t", now}},
                 {kControllerName, kDashboardName});
  }

  const auto& sched = agent_.scheduler();
  Json status{{"drone_id", id()},
              {"phase", std::string(sched::to_string(sched.phase()))},
              {"action_index", sched.action_index()},
              {"position", local_to_json(obs.position)},
              {"battery", obs.battery},
              {"t", now},
              {"velocity", local_to_json(obs.velocity)},
              {"intent_velocity", local_to_json(out.intent_velocity)},
              {"plan_rev", sched.plan_rev()}};
  if (const auto* shot = sched.current_shot(); shot && sched.phase() == sched::Phase::Shooting)
    status["shot_id"] = shot->id;
  if (!notes.empty()) {
    std::string joined;
    for (const auto& n : notes) joined += (joined.empty() ? "" : ";") + n;
    status["note"] = joined;
  }
  bus_.publish(id(), MsgType::STATUS, std::move(status));
  for (auto& n : notes) out.log.push_back(std::move(n));
  return out;
}

}  // namespace cinedrone::gcs
