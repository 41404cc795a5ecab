#include "cinedrone/gcs/session.hpp"

#include <algorithm>

#include "cinedrone/core/errors.hpp"

namespace cinedrone::gcs {

Session::Session(Mission mission, planner::WorldMap map, std::vector<planner::DroneSpec> drones,
                 std::vector<sim::SimTarget> targets, std::vector<sim::EventTrigger> triggers, SessionConfig cfg,
                 std::ostream* trace)
    : cfg_(std::move(cfg)),
      map_(map),
      grid_(map_, cfg_.controller.planner.cell),
      world_(cfg_.world, std::move(targets), std::move(triggers)),
      bus_(cfg_.fuzz_bus, cfg_.fuzz_seed),
      controller_(mission, std::move(map), drones, bus_, cfg_.controller),
      trace_(trace) {
  std::stable_sort(cfg_.fires.begin(), cfg_.fires.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  std::stable_sort(cfg_.failures.begin(), cfg_.failures.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  bus_.connect(kDashboardName);
  sched::AgentConfig agent = cfg_.agent;
  agent.scheduler.transit_altitude = cfg_.controller.planner.transit_altitude;
  agent.scheduler.cell = cfg_.controller.planner.cell;
  for (const auto& d : drones) {
    if (nodes_.count(d.drone_id)) throw ValidationError("duplicate drone id " + d.drone_id);
    sched::AgentConfig a = agent;
    a.max_speed = d.max_speed;
    nodes_.emplace(d.drone_id, std::make_unique<DroneNode>(d.drone_id, mission.origin, &grid_, a, bus_));
    world_.add_drone(d.drone_id, d.home);
  }
  for (const auto& f : cfg_.failures)
    if (!nodes_.count(f.drone_id)) throw ValidationError("failure scripted for unknown drone " + f.drone_id);
  bus_.set_observer([this](const WireMessage& m) { on_message(m); });
}

DroneNode& Session::node(const std::string& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error("unknown drone " + id);
  return *it->second;
}

std::vector<std::string> Session::start() { return controller_.start(now()); }

void Session::record(Json r) {
  if (cfg_.keep_records) records_.push_back(r);
  trace_.write(r);
  dash_.feed(r);
}

void Session::on_message(const WireMessage& m) {
  if (tap_) tap_(m);
  const double t = now();
  const Json& p = m.payload;
  switch (m.type) {
    case MsgType::PLAN:
      tick_records_.push_back(Json{{"kind", "plan"},
                                   {"t", t},
                                   {"drone_id", p["drone_id"]},
                                   {"rev", p.value("rev", 0)},
                                   {"actions", p["actions"]}});
      break;
    case MsgType::EVENT:
      tick_records_.push_back(
          Json{{"kind", "event"}, {"t", t}, {"name", p["name"]}, {"source", p.value("source", "")}});
      break;
    case MsgType::EMERGENCY:
      tick_records_.push_back(
          Json{{"kind", "emergency"}, {"t", t}, {"drone_id", p["drone_id"]}, {"emergency_kind", p["kind"]}});
      break;
    case MsgType::REPLAN_NOTICE:
      tick_records_.push_back(Json{{"kind", "notice"}, {"t", t}, {"failed", p["failed"]}});
      break;
    case MsgType::STOP: {
      Json r{{"kind", "stop"}, {"t", t}};
      if (p.contains("drone_id")) r["drone_id"] = p["drone_id"];
      tick_records_.push_back(std::move(r));
      break;
    }
    default:
      break;
  }
}

void Session::apply_command(const WireMessage& cmd) {
  if (cmd.type != MsgType::DASH_CMD) throw Error("only DASH_CMD messages are operator commands");
  validate_payload(cmd.type, cmd.payload);
  const double t = now();
  const std::string op = cmd.payload["op"].get<std::string>();
  const Json args = cmd.payload.value("args", Json::object());
  tick_records_.push_back(Json{{"kind", "command"}, {"t", t}, {"op", op}, {"args", args}, {"sender", cmd.sender}});
  if (op == "fire_event") {
    controller_.fire_event(args["name"].get<std::string>(), "Director", t);
  } else if (op == "fail_drone") {
    const std::string id = args["drone_id"].get<std::string>();
    auto it = nodes_.find(id);
    if (it == nodes_.end()) return;
    const auto kind = args.contains("kind") ? *sched::emergency_kind_from_string(args["kind"].get<std::string>())
                                            : sched::EmergencyKind::LowBattery;
    it->second->inject_failure(kind);
  } else if (op == "stop") {
    std::optional<std::string> id;
    if (args.contains("drone_id")) id = args["drone_id"].get<std::string>();
    controller_.stop(id, t);
  }
}

void Session::tick() {
  const double t = now();
  const double dt = world_.dt();
  const double eps = 1e-9;

  while (next_fire_ < cfg_.fires.size() && cfg_.fires[next_fire_].t <= t + eps)
    controller_.fire_event(cfg_.fires[next_fire_++].name, "Director", t);
  while (next_failure_ < cfg_.failures.size() && cfg_.failures[next_failure_].t <= t + eps) {
    const auto& f = cfg_.failures[next_failure_++];
    node(f.drone_id).inject_failure(f.kind);
  }
  for (const auto& e : world_.poll_triggers()) controller_.fire_event(e.name, "AutoTrigger", t);
  if (commands_)
    for (const auto& c : commands_()) apply_command(c);

  controller_.tick(t);

  const auto estimates = world_.measure_targets();
  std::map<std::string, sim::DroneCommand> commands;
  std::vector<Json> drone_records;
  for (auto& [id, node] : nodes_) {
    const sim::SimDroneState& s = world_.drone(id);
    sched::Observation obs{s.position, s.velocity, s.yaw, s.gimbal_R, s.battery};
    sched::AgentOutput out = node->step(t, dt, obs, estimates);
    const auto& sch = node->agent().scheduler();
    commands[id] = sim::DroneCommand{out.cmd, out.gimbal_rate, !sch.landed()};
    const ShootingAction* shot = sch.phase() == sched::Phase::Shooting ? sch.current_shot() : nullptr;
    drone_records.push_back(Json{{"t", t},
                                 {"drone_id", id},
                                 {"phase", std::string(sched::to_string(sch.phase()))},
                                 {"position", local_to_json(s.position)},
                                 {"setpoint", local_to_json(out.setpoint)},
                                 {"gimbal_axis", local_to_json(s.gimbal_R.col(0))},
                                 {"events", out.log},
                                 {"action_index", sch.action_index()},
                                 {"shot_id", shot ? Json(shot->id) : Json()},
                                 {"yaw", s.yaw},
                                 {"battery", s.battery}});
  }

  std::vector<Json> pending = std::move(tick_records_);
  tick_records_.clear();
  for (auto& r : pending) record(std::move(r));
  for (auto& r : drone_records) record(std::move(r));
  for (const auto& [id, p] : world_.true_target_positions())
    record(Json{{"kind", "target"}, {"t", t}, {"target_id", id}, {"position", local_to_json(p)}});

  Json state = dash_.snapshot(t);
  dash_states_.push_back(state);
  bus_.publish(kControllerName, MsgType::DASH_STATE, std::move(state), {kDashboardName});
  tick_records_.clear();
  for (auto& m : bus_.poll(kDashboardName))
    if (m.type != MsgType::STATUS && m.type != MsgType::DASH_STATE) dashboard_inbox_.push_back(std::move(m));

  world_.step(commands);
}

bool Session::finished() const {
  if (!controller_.running()) return true;
  for (const auto& [id, node] : nodes_) {
    const auto& s = node->agent().scheduler();
    if (!s.landed()) return false;
    if (s.phase() != sched::Phase::Done && s.phase() != sched::Phase::Emergency) return false;
    if (bus_.pending(id, kControllerName) != 0) return false;
  }
  return true;
}

double Session::run(double max_time) {
  while (!finished() && now() < max_time - 1e-9) tick();
  return now();
}

}  // namespace cinedrone::gcs
