#include "cinedrone/gcs/controller.hpp"

#include <algorithm>
#include <limits>

#include "cinedrone/core/errors.hpp"
#include "cinedrone/core/geo.hpp"
#include "cinedrone/core/mission_io.hpp"

namespace cinedrone::gcs {

DroneStatus status_from_payload(const Json& p) {
  validate_payload(MsgType::STATUS, p);
  DroneStatus s;
  s.drone_id = p["drone_id"].get<std::string>();
  s.phase = *sched::phase_from_string(p["phase"].get<std::string>());
  s.action_index = p["action_index"].get<int>();
  s.plan_rev = p.value("plan_rev", 0);
  s.position = local_from_json(p["position"], "/payload/position");
  s.battery = p["battery"].get<double>();
  s.t = p["t"].get<double>();
  if (p.contains("shot_id") && p["shot_id"].is_string()) s.shot_id = p["shot_id"].get<std::string>();
  return s;
}

MissionController::MissionController(Mission mission, planner::WorldMap map, std::vector<planner::DroneSpec> drones,
                                     LoopbackBus& bus, ControllerConfig cfg)
    : mission_(std::move(mission)), map_(std::move(map)), drones_(std::move(drones)), bus_(bus), cfg_(cfg) {
  bus_.connect(kControllerName);
}

int MissionController::plan_rev(const std::string& drone_id) const {
  auto it = revs_.find(drone_id);
  return it == revs_.end() ? 0 : it->second;
}

const DronePlan* MissionController::plan_at(const std::string& drone_id, int rev) const {
  auto d = history_.find(drone_id);
  if (d == history_.end()) return nullptr;
  auto r = d->second.find(rev);
  return r == d->second.end() ? nullptr : &r->second;
}

std::vector<std::string> MissionController::live_recipients() const {
  std::vector<std::string> to;
  for (const auto& d : drones_)
    if (!failed_.count(d.drone_id)) to.push_back(d.drone_id);
  to.push_back(kDashboardName);
  return to;
}

std::vector<std::string> MissionController::start(double now) {
  std::vector<std::string> reasons;
  if (running_) {
    reasons.push_back("mission already running");
    return reasons;
  }
  if (drones_.empty()) reasons.push_back("no drones available");
  for (const auto& f : validate_mission(mission_)) reasons.push_back(to_string(f));
  try {
    planner::validate_map(map_);
  } catch (const ValidationError& e) {
    reasons.push_back(std::string("map: ") + e.what());
  }
  for (const auto& [id, s] : statuses_)
    if (s.phase != sched::Phase::Idle) reasons.push_back("drone " + id + " is not idle");
  if (!reasons.empty()) return reasons;

  try {
    initial_ = planner::plan_mission(mission_, drones_, map_, cfg_.planner);
  } catch (const Error& e) {
    reasons.push_back(std::string("planning failed: ") + e.what());
    return reasons;
  }
  for (const auto& id : initial_.uncovered) log_.push_back("t=" + std::to_string(now) + " uncovered " + id);
  for (const auto& note : initial_.notes) log_.push_back(note);
  for (const auto& plan : initial_.plans) send_plan(plan.drone_id, plan);
  running_ = true;
  return reasons;
}

void MissionController::send_plan(const std::string& drone_id, DronePlan plan) {
  const int rev = ++revs_[drone_id];
  Json payload = plan_to_json(plan);
  payload["rev"] = rev;
  history_[drone_id][rev] = plan;
  plans_[drone_id] = std::move(plan);
  bus_.publish(kControllerName, MsgType::PLAN, std::move(payload), {drone_id, kDashboardName});
}

void MissionController::fire_event(const std::string& name, const std::string& source, double now) {
  if (!running_) {
    log_.push_back("event " + name + " ignored: mission not running");
    return;
  }
  const bool dup =
      std::any_of(fired_.begin(), fired_.end(), [&](const FiredEvent& e) { return e.name == name; });
  if (dup) log_.push_back("duplicate event " + name);
  fired_.push_back({name, now, source, dup});
  bus_.publish(kControllerName, MsgType::EVENT, Json{{"name", name}, {"t", now}, {"source", source}},
               live_recipients());
}

void MissionController::stop(const std::optional<std::string>& drone_id, double now) {
  (void)now;
  Json payload = Json::object();
  std::vector<std::string> to;
  if (drone_id) {
    payload["drone_id"] = *drone_id;
    stopped_.insert(*drone_id);
    to = {*drone_id, kDashboardName};
  } else {
    for (const auto& d : drones_) stopped_.insert(d.drone_id);
  }
  bus_.publish(kControllerName, MsgType::STOP, std::move(payload), std::move(to));
}

void MissionController::on_status(const DroneStatus& s) {
  auto prev = statuses_.find(s.drone_id);
  if (prev != statuses_.end() && prev->second.plan_rev != s.plan_rev && prev->second.phase == sched::Phase::Shooting &&
      s.phase != sched::Phase::Emergency) {
    if (const DronePlan* old = plan_at(s.drone_id, prev->second.plan_rev)) {
      const int i = prev->second.action_index;
      if (i >= 0 && i < static_cast<int>(old->actions.size()))
        if (const auto* shot = as_shot(old->actions[i])) completed_.insert(shot->id);
    }
  }
  const DronePlan* plan = plan_at(s.drone_id, s.plan_rev);
  if (plan) {
    const int n = std::min<int>(s.action_index, static_cast<int>(plan->actions.size()));
    for (int i = 0; i < n; ++i)
      if (const auto* shot = as_shot(plan->actions[i])) completed_.insert(shot->id);
  }
  const ShootingAction* current = nullptr;
  if (plan && s.action_index >= 0 && s.action_index < static_cast<int>(plan->actions.size()))
    current = as_shot(plan->actions[s.action_index]);
  if (s.phase == sched::Phase::Shooting && current) {
    auto it = executing_.find(s.drone_id);
    if (it == executing_.end() || it->second.rev != s.plan_rev || it->second.index != s.action_index)
      executing_[s.drone_id] = {current->id, s.plan_rev, s.action_index, s.t};
  } else {
    executing_.erase(s.drone_id);
  }
  statuses_[s.drone_id] = s;
  if (s.phase == sched::Phase::Emergency) mark_failed(s.drone_id, s.t);
}

void MissionController::mark_failed(const std::string& drone_id, double now) {
  if (!failed_.insert(drone_id).second) return;
  executing_.erase(drone_id);
  fresh_failures_.push_back(drone_id);
  log_.push_back("t=" + std::to_string(now) + " drone " + drone_id + " failed");
}

void MissionController::tick(double now) {
  for (const auto& m : bus_.poll(kControllerName)) {
    if (m.type == MsgType::STATUS) {
      on_status(status_from_payload(m.payload));
    } else if (m.type == MsgType::EMERGENCY) {
      mark_failed(m.payload["drone_id"].get<std::string>(), m.payload["t"].get<double>());
    }
  }
  if (!fresh_failures_.empty() && running_) replan(now);
}

bool MissionController::has_pending_shots(const std::string& drone_id) const {
  auto pending_in = [&](const DronePlan* plan, int from) {
    if (!plan) return false;
    for (int i = std::max(0, from); i < static_cast<int>(plan->actions.size()); ++i)
      if (const auto* shot = as_shot(plan->actions[i]); shot && !completed_.count(shot->id)) return true;
    return false;
  };
  auto latest = plans_.find(drone_id);
  const int latest_rev = plan_rev(drone_id);
  auto st = statuses_.find(drone_id);
  if (st == statuses_.end()) return latest != plans_.end() && pending_in(&latest->second, 0);
  if (st->second.plan_rev == latest_rev) return pending_in(plan_at(drone_id, latest_rev), st->second.action_index);
  return pending_in(plan_at(drone_id, latest_rev), 0) ||
         pending_in(plan_at(drone_id, st->second.plan_rev), st->second.action_index);
}

namespace {

double remaining_route(const LocalPoint& pos, const std::vector<LocalPoint>& wps) {
  if (wps.empty()) return 0.0;
  std::size_t best = 0;
  double best_d = (wps[0] - pos).norm();
  for (std::size_t j = 1; j < wps.size(); ++j) {
    const Vec3 ab = wps[j] - wps[j - 1];
    const double len2 = ab.squaredNorm();
    const double u = len2 > 0.0 ? std::clamp((pos - wps[j - 1]).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const double d = (wps[j - 1] + u * ab - pos).norm();
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  double rest = (wps[best] - pos).norm();
  for (std::size_t k = best + 1; k < wps.size(); ++k) rest += (wps[k] - wps[k - 1]).norm();
  return rest;
}

}  // namespace

planner::DroneStart MissionController::predict_start(const std::string& drone_id, double now) const {
  const auto spec = std::find_if(drones_.begin(), drones_.end(), [&](const auto& d) { return d.drone_id == drone_id; });
  planner::DroneStart start;
  auto st = statuses_.find(drone_id);
  if (st == statuses_.end()) {
    start.position = spec->home;
    start.time = now;
    start.budget_remaining = spec->flight_time_budget;
    return start;
  }
  const DroneStatus& s = st->second;
  start.position = s.position;
  start.time = now;
  start.airborne = s.position.z() > 1.0;
  const DronePlan* plan = plan_at(drone_id, s.plan_rev);
  const Action* action = nullptr;
  if (plan && s.action_index >= 0 && s.action_index < static_cast<int>(plan->actions.size()))
    action = &plan->actions[s.action_index];

  if (s.phase == sched::Phase::Shooting) {
    auto ex = executing_.find(drone_id);
    const auto shot = std::find_if(mission_.shots.begin(), mission_.shots.end(),
                                   [&](const auto& a) { return ex != executing_.end() && a.id == ex->second.shot_id; });
    if (shot != mission_.shots.end()) {
      start.position = planner::shot_endpoints(*shot, mission_.origin).end;
      start.time = std::max(now, ex->second.start + shot->duration);
      start.airborne = true;
    }
  } else if (s.phase == sched::Phase::Navigating && action) {
    if (const auto* nav = as_nav(*action)) {
      switch (nav->kind) {
        case NavigationKind::GoToWaypoint: {
          const auto wps = geo_path_to_local(nav->waypoints, mission_.origin);
          if (!wps.empty()) {
            start.position = wps.back();
            start.time = now + remaining_route(s.position, wps) / spec->max_speed;
          }
          start.airborne = true;
          break;
        }
        case NavigationKind::TakeOff:
          start.position = LocalPoint(s.position.x(), s.position.y(), nav->altitude);
          start.time = now + std::abs(nav->altitude - s.position.z()) / spec->max_speed;
          start.airborne = true;
          break;
        case NavigationKind::Land:
          start.position = LocalPoint(s.position.x(), s.position.y(), 0.0);
          start.time = now + std::max(0.0, s.position.z()) / cfg_.land_speed;
          start.airborne = false;
          break;
      }
    }
  }
  start.budget_remaining = std::max(0.0, s.battery * spec->flight_time_budget - (start.time - now));
  start.airborne_since = now;
  return start;
}

void MissionController::replan(double now) {
  ReplanRecord rec;
  rec.t = now;
  rec.newly_failed = fresh_failures_;
  fresh_failures_.clear();
  rec.failed.assign(failed_.begin(), failed_.end());

  for (const auto& d : drones_)
    if (!failed_.count(d.drone_id) && !stopped_.count(d.drone_id)) rec.healthy.push_back(d);

  const bool pending = std::any_of(rec.newly_failed.begin(), rec.newly_failed.end(),
                                   [&](const std::string& id) { return has_pending_shots(id); });

  if (rec.healthy.empty()) {
    mission_failed_ = true;
    log_.push_back("t=" + std::to_string(now) + " no healthy drones, mission failed");
    for (const auto& d : drones_) {
      if (stopped_.count(d.drone_id)) continue;
      stopped_.insert(d.drone_id);
      bus_.publish(kControllerName, MsgType::STOP, Json{{"drone_id", d.drone_id}}, {d.drone_id, kDashboardName});
    }
  } else if (!pending) {
    log_.push_back("t=" + std::to_string(now) + " failure without pending shots, plans unchanged");
  } else {
    std::set<std::string> executing_healthy;
    for (const auto& [id, ex] : executing_)
      if (!failed_.count(id)) executing_healthy.insert(ex.shot_id);

    std::set<std::string> remaining;
    for (const auto& s : mission_.shots)
      if (!completed_.count(s.id) && !executing_healthy.count(s.id)) {
        remaining.insert(s.id);
        rec.remaining.push_back(s.id);
      }

    for (const auto& d : rec.healthy) rec.starts[d.drone_id] = predict_start(d.drone_id, now);

    for (const auto& u : planner::build_units(mission_)) {
      std::vector<std::size_t> segment;
      std::size_t first = 0;
      auto flush = [&]() {
        if (segment.empty()) return;
        planner::PlanningUnit pu;
        pu.shots = segment;
        pu.estimate = now;
        if (first == 0) {
          pu.event = u.event;
          if (u.event) {
            pu.estimate = u.estimate;
            const auto fired = std::find_if(fired_.begin(), fired_.end(),
                                            [&](const FiredEvent& e) { return e.name == *u.event; });
            if (fired != fired_.end()) {
              pu.estimate = fired->t;
              pu.event_fired = true;
            }
          }
        } else {
          const std::string& pred = mission_.shots[u.shots[first - 1]].id;
          for (const auto& [id, ex] : executing_) {
            if (failed_.count(id) || ex.shot_id != pred) continue;
            pu.pinned_drone = id;
            if (auto st = rec.starts.find(id); st != rec.starts.end()) pu.estimate = st->second.time;
          }
        }
        rec.units.push_back(std::move(pu));
        segment.clear();
      };
      for (std::size_t k = 0; k < u.shots.size(); ++k) {
        if (remaining.count(mission_.shots[u.shots[k]].id)) {
          if (segment.empty()) first = k;
          segment.push_back(u.shots[k]);
        } else {
          flush();
        }
      }
      flush();
    }

    rec.result = planner::plan_units(mission_, rec.units, rec.healthy, rec.starts, map_, cfg_.planner);
    rec.replanned = true;
    for (const auto& plan : rec.result.plans) send_plan(plan.drone_id, plan);
    for (const auto& id : rec.result.uncovered)
      log_.push_back("t=" + std::to_string(now) + " re-plan leaves " + id + " uncovered");
  }

  bus_.publish(kControllerName, MsgType::REPLAN_NOTICE, Json{{"failed", rec.failed}, {"t", now}}, live_recipients());
  replans_.push_back(std::move(rec));
}

}  // namespace cinedrone::gcs
