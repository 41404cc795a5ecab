// Acceptance suite: one PASS/FAIL line per mission-level requirement.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "cinedrone/avoid/avoidance.hpp"
#include "cinedrone/control/controllers.hpp"
#include "cinedrone/core/errors.hpp"
#include "cinedrone/core/geo.hpp"
#include "cinedrone/core/mission_io.hpp"
#include "cinedrone/gcs/scenario.hpp"
#include "cinedrone/gcs/session.hpp"
#include "cinedrone/planner/planner.hpp"
#include "cinedrone/shot/trailer.hpp"
#include "cinedrone/sim/drone_model.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cinedrone;
using gcs::Session;
using gcs::SessionConfig;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Scenario {
  Mission mission;
  planner::WorldMap map;
  gcs::WorldSetup world;
};

Scenario load(const std::string& name, bool world_file = false) {
  Scenario s;
  s.mission = load_mission_file(testsupport::scenario(name + "_mission.json"));
  s.map = planner::load_map_file(testsupport::scenario(name + "_map.json"));
  s.world = world_file ? gcs::load_world_file(testsupport::scenario(name + "_world.json")) : gcs::default_world(s.mission);
  return s;
}

LocalPoint point(const Json& j) { return {j["x"].get<double>(), j["y"].get<double>(), j["z"].get<double>()}; }

bool is_drone_record(const Json& r) { return r.contains("drone_id") && r.contains("phase"); }

std::vector<std::string> log_lines(const Json& r, const std::string& prefix) {
  std::vector<std::string> out;
  for (const auto& e : r["events"]) {
    const auto s = e.get<std::string>();
    if (s.rfind(prefix, 0) == 0) out.push_back(s.substr(prefix.size()));
  }
  return out;
}

// ---------------------------------------------------------------------------------------

Outcome parkour() {
  auto sc = load("parkour");
  Session s(sc.mission, sc.map, gcs::make_drones(sc.map, 2), sc.world.targets, sc.world.triggers);
  if (!s.start().empty()) return {false, "mission refused"};
  s.run(600.0);

  std::map<std::string, double> first_shooting;
  std::map<std::string, std::vector<std::string>> sequence;
  std::map<std::string, std::string> type_of;
  for (const auto& a : sc.mission.shots) type_of[a.id] = std::string(to_string(a.shot_type));

  const auto orbit_it = std::find_if(sc.mission.shots.begin(), sc.mission.shots.end(),
                                     [](const auto& a) { return a.shot_type == ShotType::Orbit; });
  const LocalPoint center = geo_to_local(orbit_it->rt_path.front(), sc.mission.origin);
  std::optional<double> last_angle;
  double sweep = 0.0;

  for (const auto& r : s.records()) {
    if (!is_drone_record(r)) continue;
    const auto id = r["drone_id"].get<std::string>();
    if (r["phase"] == "Shooting" && !first_shooting.count(id)) first_shooting[id] = r["t"].get<double>();
    for (const auto& shot : log_lines(r, "shot_start:")) sequence[id].push_back(type_of[shot]);
    if (r["shot_id"] == orbit_it->id) {
      const Vec3 d = point(r["position"]) - center;
      const double ang = std::atan2(d.y(), d.x());
      if (last_angle) sweep += wrap_angle(ang - *last_angle);
      last_angle = ang;
    }
  }

  bool ok = s.finished() && first_shooting.size() == 2;
  double worst_start = 0.0;
  for (const auto& [id, t] : first_shooting) worst_start = std::max(worst_start, std::abs(t - 20.0));
  ok = ok && worst_start <= 0.05;

  std::set<std::vector<std::string>> got;
  for (const auto& [id, seq] : sequence) got.insert(seq);
  const std::set<std::vector<std::string>> want{{"fly_through", "flyby"}, {"static", "lateral", "orbit"}};
  ok = ok && got == want;

  const double sweep_err = rad2deg(std::abs(std::abs(sweep) - std::numbers::pi / 2));
  ok = ok && sweep_err <= 2.0;
  return {ok, fmt("first shooting |t-20| max %.3f s, sequences %s, orbit sweep %.2f deg", worst_start,
                  got == want ? "match" : "differ", rad2deg(std::abs(sweep)))};
}

// ---------------------------------------------------------------------------------------

struct RowingSample {
  LocalPoint drone;
  LocalPoint boat;
  Vec3 axis;
};

std::vector<RowingSample> rowing_steady_state() {
  auto sc = load("rowing", true);
  Session s(sc.mission, sc.map, gcs::make_drones(sc.map, 1), sc.world.targets, sc.world.triggers);
  if (!s.start().empty()) return {};
  s.run(400.0);

  std::vector<RowingSample> out;
  std::optional<double> shot_start;
  std::optional<Json> drone;
  for (const auto& r : s.records()) {
    if (is_drone_record(r)) {
      drone = r;
      if (r["phase"] == "Shooting" && !shot_start) shot_start = r["t"].get<double>();
      continue;
    }
    if (r.value("kind", "") != "target" || !drone || !shot_start) continue;
    if ((*drone)["t"] != r["t"] || (*drone)["phase"] != "Shooting") continue;
    if (r["t"].get<double>() - *shot_start < 5.0) continue;
    out.push_back({point((*drone)["position"]), point(r["position"]), point((*drone)["gimbal_axis"])});
  }
  return out;
}

Outcome rowing(const std::vector<RowingSample>& samples) {
  if (samples.empty()) return {false, "no steady-state shooting samples"};
  double worst_y = 0.0, worst_z = 0.0;
  for (const auto& s : samples) {
    worst_y = std::max(worst_y, std::abs(std::abs(s.drone.y() - s.boat.y()) - 50.0));
    worst_z = std::max(worst_z, std::abs(s.drone.z() - 3.0));
  }
  return {worst_y <= 2.5 && worst_z <= 0.2,
          fmt("%zu samples, lateral error max %.3f m, altitude error max %.3f m", samples.size(), worst_y, worst_z)};
}

Outcome gimbal(const std::vector<RowingSample>& samples) {
  if (samples.empty()) return {false, "no steady-state shooting samples"};
  double sq = 0.0, worst_up = 0.0, worst_orth = 0.0;
  for (const auto& s : samples) {
    const Vec3 los = (s.boat - s.drone).normalized();
    const double ang = std::acos(std::clamp(los.dot(s.axis.normalized()), -1.0, 1.0));
    sq += ang * ang;
    const Mat3 Rd = control::desired_camera_rotation(s.drone, s.boat);
    worst_up = std::max(worst_up, std::abs(Rd.col(1).z()));
    worst_orth = std::max(worst_orth, (Rd.transpose() * Rd - Mat3::Identity()).cwiseAbs().maxCoeff());
    worst_orth = std::max(worst_orth, std::abs(Rd.determinant() - 1.0));
  }
  const double rms = rad2deg(std::sqrt(sq / samples.size()));
  return {rms <= 1.0 && worst_up < 1e-9 && worst_orth < 1e-9,
          fmt("axis RMS error %.3f deg, |r.up| max %.1e, orthonormality defect %.1e", rms, worst_up, worst_orth)};
}

// ---------------------------------------------------------------------------------------

Outcome event_sync() {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> count(2, 4);
  std::uniform_real_distribution<double> delay(0.0, 15.0), height(4.0, 9.0);
  const double dt = 0.05;
  double worst_spread = 0.0;
  int early = 0, missing = 0;

  for (int run = 0; run < 50; ++run) {
    const int n = count(rng);
    Mission m;
    m.origin = testsupport::kOrigin;
    m.event_estimates["GO"] = 90.0;
    for (int k = 0; k < n; ++k) {
      auto a = testsupport::make_shot(ShotType::Lateral, "shot" + std::to_string(k));
      a.start_event = "GO";
      a.params.y_0 = 20.0 * (k + 1);
      a.params.z_0 = height(rng);
      m.shots.push_back(a);
    }
    const auto map = testsupport::open_map();
    sim::EventTrigger go;
    go.name = "GO";
    go.time = std::round((90.0 + delay(rng)) / dt) * dt;

    SessionConfig cfg;
    cfg.fuzz_bus = true;
    cfg.fuzz_seed = rng();
    cfg.world.seed = rng();
    Session s(m, map, gcs::make_drones(map, n), {}, {go}, cfg);
    if (!s.start().empty()) return {false, fmt("run %d refused", run)};
    while (s.now() < go.time + 2.0) s.tick();

    std::map<std::string, double> delivered, started;
    for (const auto& r : s.records()) {
      if (!is_drone_record(r)) continue;
      const auto id = r["drone_id"].get<std::string>();
      const double t = r["t"].get<double>();
      for (const auto& e : log_lines(r, "event:"))
        if (e == "GO" && !delivered.count(id)) delivered[id] = t;
      if (!log_lines(r, "shot_start:").empty() && !started.count(id)) started[id] = t;
    }
    if (static_cast<int>(started.size()) != n) {
      ++missing;
      continue;
    }
    double lo = 1e300, hi = -1e300;
    for (const auto& [id, t] : started) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
      if (!delivered.count(id) || t < delivered[id] - 1e-9 || t < go.time - 1e-9) ++early;
    }
    worst_spread = std::max(worst_spread, hi - lo);
  }
  return {missing == 0 && early == 0 && worst_spread <= dt + 1e-9,
          fmt("50 missions, max start spread %.3f s, early starts %d, missing starts %d", worst_spread, early, missing)};
}

// ---------------------------------------------------------------------------------------

Outcome avoidance() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> phase(-20.0, 20.0);
  const double L = 80.0, speed = 5.0, dt = 0.05;
  const Vec3 dir[2] = {Vec3::UnitX(), Vec3::UnitY()};
  double worst_sep = 1e300, worst_recovery = 0.0;
  int sep_fail = 0, recovery_fail = 0;

  for (int run = 0; run < 200; ++run) {
    const double off[2] = {phase(rng), phase(rng)};
    auto setpoint = [&](int i, double t) -> LocalPoint { return dir[i] * (-L + speed * t + off[i]) + Vec3(0, 0, 10); };
    sim::SimDroneState st[2];
    avoid::ReactiveLayer layer[2];
    for (int i = 0; i < 2; ++i) {
      st[i].position = setpoint(i, 0.0);
      st[i].velocity = dir[i] * speed;
      st[i].yaw = std::atan2(dir[i].y(), dir[i].x());
    }
    double min_sep = 1e300, last_far = 0.0;
    for (int k = 0; k < 3000; ++k) {
      const double t = k * dt;
      control::VelocityCommand intent[2], out[2];
      for (int i = 0; i < 2; ++i)
        intent[i] = control::velocity_command({st[i].position, st[i].yaw}, setpoint(i, t), st[i].yaw, dir[i] * speed);
      for (int i = 0; i < 2; ++i) {
        const avoid::AgentState self{std::to_string(i), st[i].position, intent[i].v, t};
        const avoid::AgentState other{std::to_string(1 - i), st[1 - i].position, intent[1 - i].v, t};
        out[i] = avoid::arbitrate(intent[i], layer[i].update(self, st[i].yaw, {other}, t));
      }
      for (int i = 0; i < 2; ++i)
        for (int sub = 0; sub < 4; ++sub) st[i] = sim::step_drone(st[i], out[i], Vec3::Zero(), dt / 4);
      min_sep = std::min(min_sep, (st[0].position - st[1].position).norm());
      for (int i = 0; i < 2; ++i)
        if ((st[i].position - setpoint(i, t + dt)).norm() > 2.0) last_far = t + dt;
    }
    // both setpoints are past the crossing point from here on
    const double diverged = std::max((L - off[0]) / speed, (L - off[1]) / speed);
    const double recovery = std::max(0.0, last_far - diverged);
    worst_sep = std::min(worst_sep, min_sep);
    worst_recovery = std::max(worst_recovery, recovery);
    sep_fail += min_sep < 8.0;
    recovery_fail += recovery > 60.0;
  }
  return {sep_fail == 0 && recovery_fail == 0,
          fmt("200 crossings, min separation %.2f m, worst recovery %.1f s", worst_sep, worst_recovery)};
}

// ---------------------------------------------------------------------------------------

double route_length(LocalPoint from, const std::vector<LocalPoint>& route) {
  double len = 0.0;
  for (const auto& p : route) {
    len += (p - from).norm();
    from = p;
  }
  return len;
}

/// Independent earliest-free-drone greedy over the same planning units.
std::size_t greedy_coverage(const Mission& m, const gcs::ReplanRecord& rec, const planner::WorldMap& map) {
  const planner::PlannerConfig cfg;
  const planner::OccupancyGrid grid(map, cfg.cell);
  struct Track {
    LocalPoint pos;
    double time = 0.0;
    double budget = 0.0;
    bool airborne = false;
    std::set<std::string> events;
  };
  std::vector<Track> tracks;
  for (const auto& d : rec.healthy) {
    Track t{d.home, 0.0, d.flight_time_budget, false, {}};
    if (auto it = rec.starts.find(d.drone_id); it != rec.starts.end())
      t = {it->second.position, it->second.time, it->second.budget_remaining, it->second.airborne, {}};
    tracks.push_back(t);
  }

  auto try_unit = [&](const planner::PlanningUnit& u, std::size_t di) -> std::optional<Track> {
    const auto& spec = rec.healthy[di];
    Track t = tracks[di];
    const double t0 = t.time, v = spec.max_speed;
    try {
      if (!t.airborne) {
        t.time += std::abs(cfg.transit_altitude - t.pos.z()) / v;
        t.pos.z() = cfg.transit_altitude;
        t.airborne = true;
      }
      for (std::size_t k = 0; k < u.shots.size(); ++k) {
        const auto& shot = m.shots[u.shots[k]];
        const auto ends = planner::shot_endpoints(shot, m.origin);
        t.time += route_length(t.pos, planner::navigation_route(grid, t.pos, ends.start, cfg.transit_altitude)) / v;
        double begin = t.time;
        if (k == 0 && u.event) {
          const double latest = u.event_fired ? u.estimate + shot.duration : u.estimate - cfg.slack;
          if (t.time > latest) return std::nullopt;
          if (!u.event_fired) begin = u.estimate;
        }
        t.time = begin + shot.duration;
        t.pos = ends.end;
      }
      const auto base = planner::nearest_reachable_base(grid, t.pos, cfg.transit_altitude);
      if (!base) return std::nullopt;
      const double home = (route_length(t.pos, base->route) + base->route.back().z() -
                           map.base_stations[base->index].z()) / v;
      if (t.time + home - t0 > t.budget - cfg.reserve_fraction * spec.flight_time_budget) return std::nullopt;
      t.budget -= t.time - t0;
    } catch (const NoPathError&) {
      return std::nullopt;
    }
    if (u.event) t.events.insert(*u.event);
    return t;
  };

  std::vector<const planner::PlanningUnit*> order;
  for (const auto& u : rec.units) order.push_back(&u);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->estimate < b->estimate; });

  std::size_t covered = 0;
  for (const auto* u : order) {
    std::optional<std::size_t> pick;
    std::optional<Track> next;
    for (std::size_t di = 0; di < rec.healthy.size(); ++di) {
      if (u->pinned_drone && *u->pinned_drone != rec.healthy[di].drone_id) continue;
      if (u->event && tracks[di].events.count(*u->event)) continue;
      auto t = try_unit(*u, di);
      if (t && (!pick || tracks[di].time < tracks[*pick].time)) {
        pick = di;
        next = std::move(t);
      }
    }
    if (!pick) continue;
    tracks[*pick] = *next;
    covered += u->shots.size();
  }
  return covered;
}

struct ShotWindow {
  std::string drone;
  double start = 0.0;
  double end = 0.0;
};

std::map<std::string, ShotWindow> shot_windows(const std::vector<Json>& records) {
  std::map<std::string, ShotWindow> w;
  for (const auto& r : records) {
    if (!is_drone_record(r)) continue;
    const auto id = r["drone_id"].get<std::string>();
    const double t = r["t"].get<double>();
    for (const auto& s : log_lines(r, "shot_start:")) w[s] = {id, t, t};
    for (const auto& s : log_lines(r, "shot_end:")) w[s].end = t;
  }
  return w;
}

Outcome emergency() {
  const auto sc = load("emergency");
  const auto drones = gcs::make_drones(sc.map, 3);

  Session dry(sc.mission, sc.map, drones, sc.world.targets, sc.world.triggers);
  if (!dry.start().empty()) return {false, "mission refused"};
  dry.run(600.0);
  const auto windows = shot_windows(dry.records());
  if (windows.size() != sc.mission.shots.size()) return {false, "dry run did not cover the mission"};

  std::mt19937_64 rng(2718);
  const int trials = 6;
  int bad_landing = 0, intrusions = 0, oracle_mismatch = 0, duplicates = 0, no_replan = 0;
  std::string picks;
  for (int trial = 0; trial < trials; ++trial) {
    const std::string victim = drones[trial % drones.size()].drone_id;
    std::vector<ShotWindow> own;
    for (const auto& [id, w] : windows)
      if (w.drone == victim) own.push_back(w);
    if (own.empty()) return {false, victim + " flies no shot in the dry run"};
    const ShotWindow win = own[std::uniform_int_distribution<std::size_t>(0, own.size() - 1)(rng)];
    const double t_fail =
        std::round(std::uniform_real_distribution<double>(win.start + 3.0, win.end - 3.0)(rng) * 20.0) / 20.0;
    picks += fmt("%s%s@%.1f", picks.empty() ? "" : ", ", win.drone.c_str(), t_fail);

    SessionConfig cfg;
    cfg.fuzz_bus = true;
    cfg.fuzz_seed = rng();
    cfg.failures.push_back({win.drone, sched::EmergencyKind::LowBattery, t_fail});
    Session s(sc.mission, sc.map, drones, sc.world.targets, sc.world.triggers, cfg);
    if (!s.start().empty()) return {false, "mission refused"};
    s.run(900.0);

    std::optional<LocalPoint> final_pos;
    std::map<std::string, int> ends;
    for (const auto& r : s.records()) {
      if (!is_drone_record(r)) continue;
      const LocalPoint p = point(r["position"]);
      if (planner::in_no_fly_zone(sc.map, p.head<2>())) ++intrusions;
      if (r["drone_id"] == win.drone) final_pos = p;
      for (const auto& e : log_lines(r, "shot_end:")) ++ends[e];
    }
    for (const auto& [id, n] : ends) duplicates += n > 1;

    double base_dist = 1e300;
    for (const auto& b : sc.map.base_stations) base_dist = std::min(base_dist, (final_pos->head<2>() - b.head<2>()).norm());
    if (!s.finished() || base_dist > 1.0 || final_pos->z() > 0.05) ++bad_landing;

    const gcs::ReplanRecord* last = nullptr;
    for (const auto& rec : s.controller().replans()) {
      if (!rec.replanned) continue;
      last = &rec;
      if (greedy_coverage(sc.mission, rec, sc.map) != rec.result.covered()) ++oracle_mismatch;
      std::set<std::string> seen;
      for (const auto& plan : rec.result.plans)
        for (const auto& a : plan.actions)
          if (const auto* sh = std::get_if<ShootingAction>(&a); sh && !seen.insert(sh->id).second) ++duplicates;
    }
    if (!last) {
      ++no_replan;
      continue;
    }
    const std::size_t expected = sc.mission.shots.size() - last->remaining.size() + last->result.covered();
    if (ends.size() != expected) ++oracle_mismatch;
  }
  return {bad_landing + intrusions + oracle_mismatch + duplicates + no_replan == 0,
          fmt("%d failures (%s): bad landings %d, no-fly samples %d, coverage mismatches %d, duplicates %d, "
              "missing re-plans %d",
              trials, picks.c_str(), bad_landing, intrusions, oracle_mismatch, duplicates, no_replan)};
}

// ---------------------------------------------------------------------------------------

Outcome astar() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> zones(0, 20);
  int compared = 0, unreachable = 0, mismatches = 0;
  for (int k = 0; k < 100; ++k) {
    const auto m = testsupport::random_grid_map(rng, zones(rng));
    const planner::OccupancyGrid g(m, 2.0);
    const LocalPoint a = testsupport::random_free(rng, m), b = testsupport::random_free(rng, m);
    const auto sa = g.snap(a.head<2>()), sb = g.snap(b.head<2>());
    std::optional<planner::GridCost> oracle;
    if (sa && sb) oracle = testsupport::dijkstra(g, *sa, *sb);
    try {
      const auto r = planner::astar_path(g, a, b);
      if (!oracle || !(r.grid_cost == *oracle)) ++mismatches;
      ++compared;
    } catch (const NoPathError&) {
      if (oracle) ++mismatches;
      ++unreachable;
    }
  }
  return {mismatches == 0 && compared > 0,
          fmt("100 maps: %d costs compared, %d unreachable, %d mismatches", compared, unreachable, mismatches)};
}

// ---------------------------------------------------------------------------------------

Outcome controller_numerics() {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst_gimbal = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Mat3 Rd = Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized().toRotationMatrix();
    Mat3 R = Rd * Eigen::AngleAxisd(deg2rad(30.0), Vec3(n(rng), n(rng), n(rng)).normalized()).toRotationMatrix();
    control::GimbalControllerState s;
    s.k_R = 4.0;
    for (int k = 0; k < 200; ++k) {
      const auto g = control::gimbal_rate_command(R, Rd, s, 0.01);
      s = g.state;
      R = sim::integrate_rotation(R, g.omega, 0.01);
    }
    worst_gimbal = std::max(worst_gimbal, rad2deg(control::rotation_angle_between(R, Rd)));
  }

  std::uniform_real_distribution<double> u(-60.0, 60.0), gain(0.1, 3.0), lim(0.5, 12.0);
  int velocity_violations = 0;
  for (int k = 0; k < 20000; ++k) {
    const control::ControllerGains g{gain(rng), gain(rng), lim(rng), lim(rng) / 4};
    const control::Pose pose{{u(rng), u(rng), u(rng)}, u(rng) / 6};
    const LocalPoint target(u(rng), u(rng), u(rng));
    const Vec3 ff = Vec3(u(rng), u(rng), u(rng)) / 6;
    const double yaw = u(rng) / 6;
    const auto cmd = control::velocity_command(pose, target, yaw, ff, g);
    const Vec3 raw = g.K_p * (target - pose.position) + ff;
    const Vec3 expect = raw.norm() <= g.v_max ? raw : Vec3(raw * (g.v_max / raw.norm()));
    if ((cmd.v - expect).norm() > 1e-9 || std::abs(cmd.yaw_rate) > g.yaw_rate_max + 1e-12) ++velocity_violations;
    const auto at = control::velocity_command({target, yaw}, target, yaw, ff, g);
    const Vec3 ff_sat = ff.norm() <= g.v_max ? ff : Vec3(ff * (g.v_max / ff.norm()));
    if ((at.v - ff_sat).norm() > 1e-12 || at.yaw_rate != 0.0) ++velocity_violations;
  }

  std::uniform_real_distribution<double> step(-4.0, 4.0);
  shot::TrailerState tr;
  tr.link_length = 3.0;
  LocalPoint target = LocalPoint::Zero();
  tr = shot::trailer_update(tr, target, 0.7);
  double worst_link = 0.0;
  for (int k = 0; k < 100000; ++k) {
    target += LocalPoint(step(rng), step(rng), 0.1 * step(rng));
    tr = shot::trailer_update(tr, target);
    worst_link = std::max(worst_link, std::abs((target - tr.trailer).head<2>().norm() - tr.link_length));
  }

  return {worst_gimbal < 1.0 && velocity_violations == 0 && worst_link < 1e-9,
          fmt("gimbal 30 deg -> %.3f deg after 2 s, velocity violations %d/40000, trailer link error %.1e",
              worst_gimbal, velocity_violations, worst_link)};
}

// ---------------------------------------------------------------------------------------

std::string parkour_trace(std::uint64_t seed) {
  auto sc = load("parkour");
  std::ostringstream os;
  SessionConfig cfg;
  cfg.fuzz_bus = true;
  cfg.fuzz_seed = seed;
  cfg.world.seed = seed;
  cfg.keep_records = false;
  Session s(sc.mission, sc.map, gcs::make_drones(sc.map, 2), sc.world.targets, sc.world.triggers, cfg, &os);
  s.start();
  s.run(600.0);
  return os.str();
}

Outcome determinism() {
  const auto a = parkour_trace(5), b = parkour_trace(5);
  return {!a.empty() && a == b, fmt("two seeded runs, %zu trace bytes each, %s", a.size(), a == b ? "identical" : "differ")};
}

}  // namespace

int main() {
  const auto rowing_samples = rowing_steady_state();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"parkour mission timing and shot assignment", parkour},
      {"rowing lateral tracking", [&] { return rowing(rowing_samples); }},
      {"gimbal pointing", [&] { return gimbal(rowing_samples); }},
      {"event-synchronised shot starts", event_sync},
      {"pairwise collision avoidance", avoidance},
      {"emergency landing and re-plan", emergency},
      {"A* optimality", astar},
      {"controller numerics", controller_numerics},
      {"deterministic replay", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
