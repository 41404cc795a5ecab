#include <doctest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <random>

#include "cinedrone/core/errors.hpp"
#include "cinedrone/core/mission_io.hpp"
#include "cinedrone/gcs/scenario.hpp"
#include "cinedrone/planner/astar.hpp"
#include "cinedrone/planner/planner.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cinedrone;
using namespace cinedrone::planner;
using testsupport::geo;
using testsupport::make_shot;
using testsupport::rect;
using testsupport::dijkstra;
using testsupport::random_free;
using testsupport::random_grid_map;

namespace {

struct RandomInstance {
  Mission mission;
  WorldMap map;
  std::vector<DroneSpec> drones;
};

RandomInstance random_instance(std::mt19937_64& rng, int n_drones) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> type(0, 7), shots(2, 7), zones(0, 3);
  RandomInstance inst;
  inst.map.bounds = {-150, -150, 150, 150};
  const int nz = zones(rng);
  for (int k = 0; k < nz; ++k) {
    const double x = -100 + 200 * u(rng), y = -100 + 200 * u(rng);
    inst.map.no_fly_zones.push_back(rect(x, y, x + 10 + 30 * u(rng), y + 10 + 30 * u(rng)));
  }
  for (auto b : {LocalPoint(-140, -140, 0), LocalPoint(140, -140, 0), LocalPoint(0, 140, 0)})
    if (!in_no_fly_zone(inst.map, b.head<2>())) inst.map.base_stations.push_back(b);
  if (inst.map.base_stations.empty()) inst.map.base_stations.push_back(LocalPoint(-140, 0, 0));

  Mission& m = inst.mission;
  m.origin = testsupport::kOrigin;
  m.event_estimates = {{"E1", 40 + 40 * u(rng)}, {"E2", 100 + 80 * u(rng)}, {"E3", 200 + 80 * u(rng)}};
  const int n = shots(rng);
  for (int k = 0; k < n; ++k) {
    auto s = make_shot(kAllShotTypes[type(rng)], "s" + std::to_string(k));
    const double x = -90 + 180 * u(rng), y = -90 + 180 * u(rng), h = 2 * M_PI * u(rng);
    s.rt_path = {geo(x, y), geo(x + 30 * std::cos(h), y + 30 * std::sin(h))};
    s.duration = 10 + 20 * u(rng);
    if (k == 0 || u(rng) < 0.6) s.start_event = "E" + std::to_string(1 + static_cast<int>(3 * u(rng)) % 3);
    m.shots.push_back(s);
  }
  inst.drones = gcs::make_drones(inst.map, n_drones, 5.0 + 3.0 * u(rng), 400 + 800 * u(rng));
  return inst;
}

// Sample every leg the drone flies between actions (outside shots) at half-cell spacing.
void check_routes_clear(const Mission& m, const WorldMap& map, const DronePlan& plan, const LocalPoint& home,
                        double cell) {
  LocalPoint pos = home;
  auto leg = [&](const LocalPoint& a, const LocalPoint& b) {
    const int steps = std::max(1, static_cast<int>(std::ceil((b - a).head<2>().norm() / (0.5 * cell))));
    for (int k = 0; k <= steps; ++k) {
      const LocalPoint p = a + (b - a) * (static_cast<double>(k) / steps);
      REQUIRE_FALSE(in_no_fly_zone(map, p.head<2>()));
    }
  };
  for (const auto& a : plan.actions) {
    if (const auto* nav = as_nav(a)) {
      if (nav->kind == NavigationKind::TakeOff) pos.z() = nav->altitude;
      for (const auto& w : geo_path_to_local(nav->waypoints, m.origin)) {
        leg(pos, w);
        pos = w;
      }
    } else {
      pos = shot_endpoints(*as_shot(a), m.origin).end;
    }
  }
}

}  // namespace

TEST_SUITE("astar") {
  TEST_CASE("straight and diagonal runs on an open map") {
    WorldMap m = testsupport::open_map(50);
    OccupancyGrid g(m, 2.0);
    auto r = astar_path(g, {0, 0, 0}, {20, 0, 0});
    CHECK(r.grid_cost == GridCost{10, 0});
    CHECK(r.waypoints.size() == 2);
    CHECK(r.length() == doctest::Approx(20.0));

    r = astar_path(g, {0, 0, 0}, {10, 10, 0});
    CHECK(r.grid_cost == GridCost{0, 5});
    CHECK(r.grid_length(2.0) == doctest::Approx(10 * std::sqrt(2.0)));
  }

  TEST_CASE("a wall forces a detour and the smoothed path stays clear") {
    WorldMap m = testsupport::open_map(50);
    m.no_fly_zones.push_back(rect(-2, -30, 2, 30));
    const auto r = astar_path(m, {-20, 0, 0}, {20, 0, 0}, 2.0);
    CHECK(r.length() > 40.0);
    for (std::size_t k = 1; k < r.waypoints.size(); ++k)
      CHECK(segment_clear(m, r.waypoints[k - 1].head<2>(), r.waypoints[k].head<2>()));
    CHECK(r.waypoints.front() == LocalPoint(-20, 0, 0));
    CHECK(r.waypoints.back() == LocalPoint(20, 0, 0));
  }

  TEST_CASE("endpoints inside a zone, outside the bounds or sealed off have no path") {
    WorldMap m = testsupport::open_map(50);
    m.no_fly_zones.push_back(rect(10, 10, 20, 20));
    CHECK_THROWS_AS(astar_path(m, {0, 0, 0}, {15, 15, 0}, 2.0), NoPathError);
    CHECK_THROWS_AS(astar_path(m, {0, 0, 0}, {80, 0, 0}, 2.0), NoPathError);

    WorldMap box = testsupport::open_map(50);
    box.no_fly_zones = {rect(-12, -12, 12, -10), rect(-12, 10, 12, 12), rect(-12, -10, -10, 10), rect(10, -10, 12, 10)};
    CHECK_THROWS_AS(astar_path(box, {0, 0, 0}, {30, 30, 0}, 2.0), NoPathError);
  }

  TEST_CASE("cost equals a Dijkstra oracle on random maps") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> zones(0, 20);
    int compared = 0;
    for (int k = 0; k < 100; ++k) {
      const WorldMap m = random_grid_map(rng, zones(rng));
      const OccupancyGrid g(m, 2.0);
      const LocalPoint a = random_free(rng, m), b = random_free(rng, m);
      const auto sa = g.snap(a.head<2>()), sb = g.snap(b.head<2>());
      std::optional<GridCost> oracle;
      if (sa && sb) oracle = dijkstra(g, *sa, *sb);
      if (!oracle) {
        CHECK_THROWS_AS(astar_path(g, a, b), NoPathError);
        continue;
      }
      const auto r = astar_path(g, a, b);
      CHECK(r.grid_cost == *oracle);
      ++compared;
    }
    CHECK(compared >= 90);
  }
}

TEST_SUITE("planner") {
  TEST_CASE("shot endpoints follow the rail") {
    const auto s = make_shot(ShotType::Lateral);
    const auto e = shot_endpoints(s, testsupport::kOrigin);
    CHECK((e.start - LocalPoint(0, 20, 4)).norm() < 1e-6);
    CHECK((e.end - LocalPoint(40, 20, 4)).norm() < 1e-6);

    const auto o = make_shot(ShotType::Orbit);
    const auto eo = shot_endpoints(o, testsupport::kOrigin);
    CHECK((eo.start - LocalPoint(10, 0, 8)).norm() < 1e-6);
  }

  TEST_CASE("chained shots form one unit behind their head") {
    const Mission m = load_mission_file(testsupport::scenario("parkour_mission.json"));
    const auto units = build_units(m);
    REQUIRE(units.size() == 2);
    CHECK(units[0].shots == std::vector<std::size_t>{0, 1});
    CHECK(units[1].shots == std::vector<std::size_t>{2, 3, 4});
    CHECK(*units[0].event == "START_RACE");
    CHECK(units[1].estimate == doctest::Approx(20.0));
  }

  TEST_CASE("parkour with two drones splits into the two sequences") {
    const Mission m = load_mission_file(testsupport::scenario("parkour_mission.json"));
    const WorldMap map = load_map_file(testsupport::scenario("parkour_map.json"));
    const auto r = plan_mission(m, gcs::make_drones(map, 2), map);
    CHECK(r.uncovered.empty());
    REQUIRE(r.plans.size() == 2);
    std::vector<std::vector<std::string>> seqs;
    for (const auto& p : r.plans) {
      std::vector<std::string> ids;
      for (const auto& a : p.actions)
        if (const auto* s = as_shot(a)) ids.push_back(s->id);
      seqs.push_back(ids);
      CHECK(as_nav(p.actions.front())->kind == NavigationKind::TakeOff);
      CHECK(as_nav(p.actions.back())->kind == NavigationKind::Land);
      const auto first = std::find_if(p.actions.begin(), p.actions.end(), [](const Action& a) { return as_shot(a); });
      CHECK(*as_shot(*first)->start_event == "START_RACE");
    }
    std::sort(seqs.begin(), seqs.end());
    CHECK(seqs[0] == std::vector<std::string>{"fly_through", "flyby"});
    CHECK(seqs[1] == std::vector<std::string>{"static", "lateral", "orbit"});
  }

  TEST_CASE("one drone covers only one of two concurrent shots") {
    Mission m;
    m.origin = testsupport::kOrigin;
    m.event_estimates["START_RACE"] = 60.0;
    for (const char* id : {"a", "b"}) {
      auto s = make_shot(ShotType::Lateral, id);
      s.start_event = "START_RACE";
      m.shots.push_back(s);
    }
    const WorldMap map = testsupport::open_map();
    const auto r = plan_mission(m, gcs::make_drones(map, 1), map);
    CHECK(r.covered() == 1);
    CHECK(r.uncovered.size() == 1);
  }

  TEST_CASE("two drones and two sequential shots give full coverage") {
    Mission m;
    m.origin = testsupport::kOrigin;
    m.event_estimates = {{"E1", 100.0}, {"E2", 200.0}};
    auto a = make_shot(ShotType::Lateral, "a");
    a.start_event = "E1";
    auto b = make_shot(ShotType::Flyby, "b");
    b.start_event = "E2";
    b.rt_path = {geo(-40, 60), geo(0, 60)};
    m.shots = {a, b};
    const WorldMap map = testsupport::open_map();
    const auto drones = gcs::make_drones(map, 2);

    // Exhaustive oracle over the possible assignments: each shot alone on either drone is
    // feasible, so at least one assignment covers both.
    int feasible_pairs = 0;
    for (int da = 0; da < 2; ++da)
      for (int db = 0; db < 2; ++db) {
        Mission only_a = m, only_b = m;
        only_a.shots = {a};
        only_b.shots = {b};
        const bool fa = plan_mission(only_a, {drones[da]}, map).covered() == 1;
        const bool fb = plan_mission(only_b, {drones[db]}, map).covered() == 1;
        feasible_pairs += fa && fb && da != db;
      }
    REQUIRE(feasible_pairs > 0);
    const auto r = plan_mission(m, drones, map);
    CHECK(r.covered() == 2);
    CHECK(r.uncovered.empty());
  }

  TEST_CASE("a budget too short for the trip leaves the shot uncovered") {
    Mission m;
    m.origin = testsupport::kOrigin;
    m.event_estimates["E"] = 200.0;
    auto s = make_shot(ShotType::Lateral);
    s.start_event = "E";
    m.shots = {s};
    const WorldMap map = testsupport::open_map();
    const auto r = plan_mission(m, gcs::make_drones(map, 1, 6.0, 50.0), map);
    CHECK(r.covered() == 0);
    REQUIRE(r.plans.size() == 1);
    CHECK(r.plans[0].actions.empty());
  }

  TEST_CASE("nearest base behind a sealed enclosure is skipped") {
    WorldMap map = testsupport::open_map(100);
    map.base_stations = {LocalPoint(0, 0, 0), LocalPoint(80, 0, 0)};
    map.no_fly_zones = {rect(-12, -12, 12, -10), rect(-12, 10, 12, 12), rect(-12, -10, -10, 10), rect(10, -10, 12, 10)};
    const OccupancyGrid g(map, 2.0);
    const auto choice = nearest_reachable_base(g, LocalPoint(25, 0, 15), 15.0);
    REQUIRE(choice);
    CHECK(choice->index == 1);
    CHECK(choice->route.back().head<2>() == map.base_stations[1].head<2>());

    const auto avoid_first = nearest_reachable_base(g, LocalPoint(60, 0, 15), 15.0, {1});
    REQUIRE(avoid_first);
    CHECK(avoid_first->index == 1);
  }

  TEST_CASE("random instances: clear routes, slack, disjoint shots, monotone coverage") {
    std::mt19937_64 rng(99);
    const PlannerConfig cfg;
    for (int k = 0; k < 60; ++k) {
      CAPTURE(k);
      const auto inst = random_instance(rng, 1 + k % 3);
      const auto r = plan_mission(inst.mission, inst.drones, inst.map, cfg);
      CHECK(r.covered() + r.uncovered.size() == inst.mission.shots.size());

      std::map<std::string, std::vector<ScheduledShot>> per_drone;
      for (const auto& s : r.schedule) per_drone[s.drone_id].push_back(s);

      for (std::size_t d = 0; d < inst.drones.size(); ++d) {
        const auto& spec = inst.drones[d];
        const auto& plan = r.plans[d];
        check_routes_clear(inst.mission, inst.map, plan, spec.home, cfg.cell);

        // replay the plan with max-speed kinematics
        LocalPoint pos = spec.home;
        double t = 0.0;
        std::size_t next = 0;
        const auto& sched = per_drone[spec.drone_id];
        for (std::size_t i = 0; i < plan.actions.size(); ++i) {
          const Action& a = plan.actions[i];
          if (const auto* nav = as_nav(a)) {
            if (nav->kind == NavigationKind::TakeOff) {
              t += std::abs(nav->altitude - pos.z()) / spec.max_speed;
              pos.z() = nav->altitude;
            }
            for (const auto& w : geo_path_to_local(nav->waypoints, inst.mission.origin)) {
              t += (w - pos).norm() / spec.max_speed;
              pos = w;
            }
            continue;
          }
          const auto* shot = as_shot(a);
          REQUIRE(next < sched.size());
          const auto& entry = sched[next++];
          REQUIRE(entry.shot_id == shot->id);
          CHECK(t == doctest::Approx(entry.arrival).epsilon(1e-9));
          const bool head = shot->start_event.has_value();
          if (head) {
            const double est = inst.mission.event_estimates.at(*shot->start_event);
            CHECK(t <= est - cfg.slack + 1e-9);
            t = est;
          }
          CHECK(entry.start == doctest::Approx(t));
          t += shot->duration;
          pos = shot_endpoints(*shot, inst.mission.origin).end;
        }
        CHECK(next == sched.size());

        for (std::size_t i = 1; i < sched.size(); ++i) CHECK(sched[i].start >= sched[i - 1].end - 1e-9);
      }

      auto more = inst.drones;
      planner::DroneSpec extra = more.back();
      extra.drone_id = "extra";
      extra.home.x() += 7.0;
      more.push_back(extra);
      CHECK(plan_mission(inst.mission, more, inst.map, cfg).covered() >= r.covered());
    }
  }
}

TEST_SUITE("world map") {
  TEST_CASE("point in polygon and distances") {
    const auto sq = rect(0, 0, 10, 10);
    CHECK(point_in_polygon({5, 5}, sq));
    CHECK_FALSE(point_in_polygon({15, 5}, sq));
    CHECK(distance_to_polygon({13, 14}, sq) == doctest::Approx(5.0));
    CHECK(segment_intersects_polygon({-5, 5}, {15, 5}, sq));
    CHECK_FALSE(segment_intersects_polygon({-5, 15}, {15, 15}, sq));
    CHECK(segment_distance_to_polygon({-5, 12}, {15, 12}, sq) == doctest::Approx(2.0));
  }

  TEST_CASE("map validation and strict parsing") {
    WorldMap m = testsupport::open_map(50);
    CHECK_NOTHROW(validate_map(m));
    m.base_stations.push_back(LocalPoint(0, 0, 0));
    m.no_fly_zones.push_back(rect(-5, -5, 5, 5));
    CHECK_THROWS_AS(validate_map(m), ValidationError);

    WorldMap bowtie = testsupport::open_map(50);
    planner::Polygon p;
    p.vertices = {{0, 0}, {10, 10}, {10, 0}, {0, 10}};
    p.finalize();
    bowtie.no_fly_zones.push_back(p);
    CHECK_THROWS_AS(validate_map(bowtie), ValidationError);

    const Json j = map_to_json(testsupport::open_map(50));
    CHECK(map_to_json(map_from_json(j)) == j);
    Json bad = j;
    bad["bounds"]["min_x"] = "west";
    try {
      map_from_json(bad);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.path() == "/bounds/min_x");
    }
  }
}
