#include "cinedrone/sched/scheduler.hpp"

#include "cinedrone/core/geo.hpp"
#include "cinedrone/planner/planner.hpp"

namespace cinedrone::sched {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::Navigating: return "Navigating";
    case Phase::WaitingEvent: return "WaitingEvent";
    case Phase::Shooting: return "Shooting";
    case Phase::Emergency: return "Emergency";
    case Phase::Done: return "Done";
  }
  return "?";
}

std::string_view to_string(EmergencyKind k) { return k == EmergencyKind::LowBattery ? "LowBattery" : "GpsLoss"; }

std::optional<Phase> phase_from_string(std::string_view s) {
  for (Phase p : {Phase::Idle, Phase::Navigating, Phase::WaitingEvent, Phase::Shooting, Phase::Emergency, Phase::Done})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

std::optional<EmergencyKind> emergency_kind_from_string(std::string_view s) {
  if (s == "LowBattery") return EmergencyKind::LowBattery;
  if (s == "GpsLoss") return EmergencyKind::GpsLoss;
  return std::nullopt;
}

Scheduler::Scheduler(std::string drone_id, GeoPoint origin, const planner::OccupancyGrid* grid, SchedulerConfig cfg)
    : drone_id_(std::move(drone_id)), origin_(origin), grid_(grid), cfg_(cfg) {}

std::vector<LocalPoint> Scheduler::to_local(const std::vector<GeoPoint>& pts) const {
  return geo_path_to_local(pts, origin_);
}

const ShootingAction* Scheduler::current_shot() const {
  if (action_index_ < 0 || action_index_ >= static_cast<int>(plan_.actions.size())) return nullptr;
  return as_shot(plan_.actions[action_index_]);
}

bool Scheduler::adopt_plan(const DronePlan& plan, std::optional<int> rev) {
  if (phase_ == Phase::Emergency || stopping_) return false;
  const int next_rev = rev.value_or(plan_rev_ + 1);
  if (phase_ == Phase::Navigating || phase_ == Phase::Shooting) {
    pending_ = plan;
    pending_rev_ = next_rev;
    log_.push_back("plan_queued");
    return true;
  }
  plan_ = plan;
  pending_.reset();
  plan_rev_ = next_rev;
  action_index_ = 0;
  nav_ = NavMode::None;
  phase_ = Phase::Idle;
  log_.push_back("plan:" + std::to_string(plan_rev_));
  return true;
}

void Scheduler::handle_event(const Event& e) {
  if (latched_.insert(e.name).second) log_.push_back("event:" + e.name);
}

void Scheduler::divert_to_base(const LocalPoint& position) {
  route_.clear();
  route_pos_ = 0;
  if (grid_) {
    if (auto base = planner::nearest_reachable_base(*grid_, position, cfg_.transit_altitude)) {
      route_ = std::move(base->route);
      landing_base_ = base->index;
      land_after_route_ = true;
      nav_ = NavMode::Route;
      return;
    }
  }
  landed_in_place_ = true;
  log_.push_back("no_reachable_base");
  nav_ = NavMode::Land;
  hover_ = position;
}

void Scheduler::handle_emergency(EmergencyKind kind, double now, const LocalPoint& position) {
  (void)now;
  if (phase_ == Phase::Emergency) return;
  emergency_ = kind;
  phase_ = Phase::Emergency;
  pending_.reset();
  log_.push_back("emergency:" + std::string(to_string(kind)));
  if (landed_) {
    nav_ = NavMode::None;
    return;
  }
  divert_to_base(position);
}

void Scheduler::stop(double now, const LocalPoint& position) {
  (void)now;
  if (phase_ == Phase::Emergency || stopping_) return;
  stopping_ = true;
  pending_.reset();
  log_.push_back("stop");
  if (landed_) {
    nav_ = NavMode::None;
    phase_ = Phase::Done;
    return;
  }
  phase_ = Phase::Navigating;
  divert_to_base(position);
}

void Scheduler::begin_action(double now, const LocalPoint& position) {
  if (action_index_ >= static_cast<int>(plan_.actions.size())) {
    phase_ = Phase::Done;
    nav_ = NavMode::None;
    hover_ = position;
    log_.push_back("done");
    return;
  }
  const Action& a = plan_.actions[action_index_];
  if (const auto* nav = as_nav(a)) {
    phase_ = Phase::Navigating;
    land_after_route_ = false;
    switch (nav->kind) {
      case NavigationKind::TakeOff:
        landed_ = false;
        if (position.z() > cfg_.airborne_height) {
          complete_action(now, position);
          return;
        }
        log_.push_back("takeoff");
        nav_ = NavMode::Climb;
        climb_target_ = LocalPoint(position.x(), position.y(), nav->altitude);
        return;
      case NavigationKind::GoToWaypoint:
        log_.push_back("goto");
        route_ = to_local(nav->waypoints);
        route_pos_ = 0;
        nav_ = NavMode::Route;
        return;
      case NavigationKind::Land:
        log_.push_back("land");
        nav_ = NavMode::Land;
        hover_ = position;
        return;
    }
  }
  const auto* shot = as_shot(a);
  nav_ = NavMode::None;
  if (action_index_ > 0) {
    const auto* prev = as_nav(plan_.actions[action_index_ - 1]);
    hover_ = prev && prev->kind == NavigationKind::GoToWaypoint && !route_.empty() ? route_.back() : position;
  } else {
    hover_ = position;
  }
  if (shot->start_event && !latched_.count(*shot->start_event)) {
    phase_ = Phase::WaitingEvent;
    log_.push_back("wait:" + *shot->start_event);
    return;
  }
  phase_ = Phase::Shooting;
  shot_start_ = now;
  log_.push_back("shot_start:" + shot->id);
}

void Scheduler::complete_action(double now, const LocalPoint& position) {
  if (pending_) {
    plan_ = std::move(*pending_);
    pending_.reset();
    plan_rev_ = pending_rev_;
    action_index_ = 0;
    log_.push_back("plan:" + std::to_string(plan_rev_));
  } else {
    ++action_index_;
  }
  begin_action(now, position);
}

bool Scheduler::advance_route(const LocalPoint& position) {
  while (route_pos_ < route_.size()) {
    const bool last = route_pos_ + 1 == route_.size();
    const double radius = last ? cfg_.final_capture_radius : cfg_.capture_radius;
    if ((position - route_[route_pos_]).norm() > radius) return false;
    ++route_pos_;
  }
  return true;
}

void Scheduler::tick(double now, const LocalPoint& position) {
  for (int guard = 0; guard < 64; ++guard) {
    const Phase before = phase_;
    const int index_before = action_index_;
    const int rev_before = plan_rev_;
    const NavMode nav_before = nav_;

    switch (phase_) {
      case Phase::Idle:
        if (!plan_.actions.empty() && action_index_ < static_cast<int>(plan_.actions.size()))
          begin_action(now, position);
        break;
      case Phase::Navigating:
      case Phase::Emergency:
        switch (nav_) {
          case NavMode::Climb:
            if (std::abs(position.z() - climb_target_.z()) <= cfg_.final_capture_radius) complete_action(now, position);
            break;
          case NavMode::Route:
            if (advance_route(position)) {
              if (land_after_route_) {
                nav_ = NavMode::Land;
                hover_ = route_.empty() ? position : route_.back();
                if (grid_ && landing_base_) hover_.head<2>() = grid_->map().base_stations[*landing_base_].head<2>();
              } else {
                complete_action(now, position);
              }
            }
            break;
          case NavMode::Land:
            if (position.z() <= cfg_.ground_level) {
              landed_ = true;
              nav_ = NavMode::None;
              log_.push_back("landed");
              if (phase_ == Phase::Emergency) break;
              if (stopping_) {
                phase_ = Phase::Done;
                log_.push_back("done");
              } else {
                complete_action(now, position);
              }
            }
            break;
          case NavMode::None:
            break;
        }
        break;
      case Phase::WaitingEvent: {
        const auto* shot = current_shot();
        if (shot && shot->start_event && latched_.count(*shot->start_event)) {
          phase_ = Phase::Shooting;
          shot_start_ = now;
          log_.push_back("shot_start:" + shot->id);
        }
        break;
      }
      case Phase::Shooting: {
        const auto* shot = current_shot();
        if (shot && now - shot_start_ >= shot->duration - 1e-9) {
          log_.push_back("shot_end:" + shot->id);
          complete_action(now, position);
        }
        break;
      }
      case Phase::Done:
        break;
    }
    if (phase_ == before && action_index_ == index_before && plan_rev_ == rev_before && nav_ == nav_before) break;
  }
}

Task Scheduler::task() const {
  Task t;
  switch (phase_) {
    case Phase::Idle:
    case Phase::Done:
      t.kind = landed_ ? Task::Kind::Ground : Task::Kind::Hover;
      t.target = hover_;
      return t;
    case Phase::WaitingEvent:
      t.kind = Task::Kind::Hover;
      t.target = hover_;
      return t;
    case Phase::Shooting:
      t.kind = Task::Kind::Shoot;
      t.shot = current_shot();
      t.target = hover_;
      return t;
    case Phase::Navigating:
    case Phase::Emergency:
      switch (nav_) {
        case NavMode::Climb:
          t.kind = Task::Kind::Climb;
          t.target = climb_target_;
          return t;
        case NavMode::Route:
          if (route_pos_ < route_.size()) {
            t.kind = Task::Kind::Waypoint;
            t.target = route_[route_pos_];
            t.final_waypoint = route_pos_ + 1 == route_.size();
          } else {
            t.kind = Task::Kind::Hover;
            t.target = route_.empty() ? hover_ : route_.back();
          }
          return t;
        case NavMode::Land:
          t.kind = Task::Kind::Descend;
          t.target = hover_;
          return t;
        case NavMode::None:
          t.kind = landed_ ? Task::Kind::Ground : Task::Kind::Hover;
          t.target = hover_;
          return t;
      }
  }
  return t;
}

std::vector<std::string> Scheduler::drain_log() {
  std::vector<std::string> out;
  out.swap(log_);
  return out;
}

}  // namespace cinedrone::sched
