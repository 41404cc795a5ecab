#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cinedrone/core/errors.hpp"
#include "cinedrone/core/mission_io.hpp"
#include "cinedrone/core/validation.hpp"
#include "cinedrone/gcs/dash_state.hpp"
#include "cinedrone/gcs/net.hpp"
#include "cinedrone/gcs/scenario.hpp"
#include "cinedrone/gcs/session.hpp"
#include "cinedrone/planner/planner.hpp"

using namespace cinedrone;

namespace {

gcs::ScriptedFire parse_fire(const std::string& s) {
  const auto at = s.rfind('@');
  if (at == std::string::npos || at == 0) throw Error("--fire expects <event>@<t>, got " + s);
  return {s.substr(0, at), std::stod(s.substr(at + 1))};
}

gcs::ScriptedFailure parse_fail(const std::string& s) {
  const auto colon = s.find(':');
  const auto at = s.rfind('@');
  if (colon == std::string::npos || at == std::string::npos || at < colon)
    throw Error("--fail expects <drone>:<kind>@<t>, got " + s);
  const auto kind = sched::emergency_kind_from_string(s.substr(colon + 1, at - colon - 1));
  if (!kind) throw Error("unknown emergency kind in " + s + " (LowBattery or GpsLoss)");
  return {s.substr(0, colon), *kind, std::stod(s.substr(at + 1))};
}

int cmd_validate(const std::string& mission_file, const std::string& map_file) {
  const Mission m = load_mission_file(mission_file);
  const auto findings = validate_mission(m);
  for (const auto& f : findings) std::cout << to_string(f) << "\n";
  if (!map_file.empty()) planner::validate_map(planner::load_map_file(map_file));
  std::cout << (findings.empty() ? "mission valid: " : "mission invalid: ") << m.shots.size() << " shots, "
            << findings.size() << " findings\n";
  return findings.empty() ? 0 : 1;
}

int cmd_plan(const std::string& mission_file, const std::string& map_file, int n) {
  const Mission m = load_mission_file(mission_file);
  const auto map = planner::load_map_file(map_file);
  const auto findings = validate_mission(m);
  if (!findings.empty()) {
    for (const auto& f : findings) std::cerr << to_string(f) << "\n";
    return 1;
  }
  const auto result = planner::plan_mission(m, gcs::make_drones(map, n), map);
  Json out{{"plans", Json::array()}, {"schedule", Json::array()}, {"uncovered", result.uncovered},
           {"notes", result.notes}};
  for (const auto& p : result.plans) out["plans"].push_back(plan_to_json(p));
  for (const auto& s : result.schedule)
    out["schedule"].push_back(
        Json{{"shot_id", s.shot_id}, {"drone_id", s.drone_id}, {"arrival", s.arrival}, {"start", s.start}, {"end", s.end}});
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct RunOptions {
  std::string mission, map, world, trace, listen;
  int drones = 2;
  std::uint64_t seed = 1;
  bool realtime = false;
  bool fuzz = false;
  double duration = 900.0;
  std::vector<std::string> fires, fails;
};

int cmd_run(const RunOptions& o) {
  const Mission m = load_mission_file(o.mission);
  const auto map = planner::load_map_file(o.map);
  const gcs::WorldSetup world = o.world.empty() ? gcs::default_world(m) : gcs::load_world_file(o.world);

  gcs::SessionConfig cfg;
  cfg.world.seed = o.seed;
  cfg.fuzz_bus = o.fuzz;
  cfg.fuzz_seed = o.seed;
  cfg.keep_records = false;
  for (const auto& f : o.fires) cfg.fires.push_back(parse_fire(f));
  for (const auto& f : o.fails) cfg.failures.push_back(parse_fail(f));

  std::ofstream trace_file;
  if (!o.trace.empty()) {
    trace_file.open(o.trace, std::ios::binary);
    if (!trace_file) throw Error("cannot write " + o.trace);
  }
  gcs::Session session(m, map, gcs::make_drones(map, o.drones), world.targets, world.triggers, cfg,
                       o.trace.empty() ? nullptr : &trace_file);

  std::unique_ptr<gcs::NdjsonServer> server;
  if (!o.listen.empty()) {
    server = std::make_unique<gcs::NdjsonServer>(o.listen);
    std::cout << "listening on port " << server->port() << std::endl;
    session.set_tap([&](const gcs::WireMessage& msg) { server->broadcast(gcs::encode(msg)); });
    session.set_command_source([&] { return server->drain_commands(); });
  }

  const auto refused = session.start();
  if (!refused.empty()) {
    std::cerr << "mission refused:\n";
    for (const auto& r : refused) std::cerr << "  " << r << "\n";
    return 1;
  }

  const auto period = std::chrono::duration<double>(session.world().dt());
  auto next = std::chrono::steady_clock::now();
  while (!session.finished() && session.now() < o.duration - 1e-9) {
    session.tick();
    if (o.realtime) {
      next += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
      std::this_thread::sleep_until(next);
    }
  }

  const auto& ctl = session.controller();
  std::cout << "finished at t=" << session.now() << " s\n";
  std::cout << "shots completed: " << ctl.completed_shots().size() << "/" << m.shots.size() << "\n";
  std::cout << "failed drones: " << ctl.failed().size() << ", re-plans: " << ctl.replans().size() << "\n";
  for (const auto& line : ctl.log()) std::cout << "  " << line << "\n";
  return 0;
}

int cmd_replay(const std::string& trace_file, const std::string& out_file) {
  std::ifstream in(trace_file, std::ios::binary);
  if (!in) throw Error("cannot open " + trace_file);
  const auto states = gcs::replay_dash_states(in);
  std::ofstream out_stream;
  std::ostream* out = &std::cout;
  if (!out_file.empty()) {
    out_stream.open(out_file, std::ios::binary);
    if (!out_stream) throw Error("cannot write " + out_file);
    out = &out_stream;
  }
  for (const auto& s : states) *out << s.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-drone cinematography mission engine with a built-in simulator"};
  app.require_subcommand(1);

  std::string mission, map, trace, out;
  int drones = 2;

  auto* validate = app.add_subcommand("validate", "Check a mission file (and optionally a map)");
  validate->add_option("--mission", mission, "Mission JSON")->required()->check(CLI::ExistingFile);
  validate->add_option("--map", map, "Map JSON")->check(CLI::ExistingFile);

  auto* plan = app.add_subcommand("plan", "Print the offline plan for n drones");
  plan->add_option("--mission", mission, "Mission JSON")->required()->check(CLI::ExistingFile);
  plan->add_option("--map", map, "Map JSON")->required()->check(CLI::ExistingFile);
  plan->add_option("--drones", drones, "Number of drones")->check(CLI::NonNegativeNumber);

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Simulate a mission end to end");
  run->add_option("--mission", ro.mission, "Mission JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--map", ro.map, "Map JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--drones", ro.drones, "Number of drones")->check(CLI::NonNegativeNumber);
  run->add_option("--seed", ro.seed, "Simulation seed");
  run->add_flag("--realtime", ro.realtime, "Pace ticks to wall-clock time");
  run->add_option("--listen", ro.listen, "Dashboard listener address, host:port (port 0 = any)");
  run->add_option("--fire", ro.fires, "Director event, <event>@<t>");
  run->add_option("--fail", ro.fails, "Injected failure, <drone>:<LowBattery|GpsLoss>@<t>");
  run->add_option("--trace", ro.trace, "Trace output (JSON lines)");
  run->add_option("--world", ro.world, "World file with targets and triggers")->check(CLI::ExistingFile);
  run->add_option("--duration", ro.duration, "Simulated time limit in seconds");
  run->add_flag("--fuzz-bus", ro.fuzz, "Delay and reorder bus messages");

  auto* replay = app.add_subcommand("replay", "Rebuild the dashboard states from a trace");
  replay->add_option("--trace", trace, "Trace file")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", out, "Write DASH_STATE payloads here instead of stdout");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*validate) return cmd_validate(mission, map);
    if (*plan) return cmd_plan(mission, map, drones);
    if (*run) return cmd_run(ro);
    if (*replay) return cmd_replay(trace, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
