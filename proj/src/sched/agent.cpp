#include "cinedrone/sched/agent.hpp"

#include <cmath>

#include "cinedrone/core/errors.hpp"
#include "cinedrone/core/geo.hpp"

namespace cinedrone::sched {

DroneAgent::DroneAgent(std::string drone_id, GeoPoint origin, const planner::OccupancyGrid* grid, AgentConfig cfg)
    : sched_(std::move(drone_id), origin, grid, cfg.scheduler),
      cfg_(cfg),
      layer_(cfg.avoidance),
      gimbal_(cfg.gimbal) {}

void DroneAgent::raise_emergency(EmergencyKind kind, double now, const Observation& obs) {
  if (sched_.phase() == Phase::Emergency) return;
  if (sched_.phase() == Phase::Shooting) camera_.command(now, drone_id(), control::CameraCommand::RecordStop);
  sched_.handle_emergency(kind, now, obs.position);
  exec_shot_.clear();
  exec_start_ = -1.0;
}

void DroneAgent::start_shot(const ShootingAction& shot, double now) {
  exec_shot_ = shot.id;
  exec_start_ = sched_.shot_start();
  rail_ = shot::Rail(geo_path_to_local(shot.rt_path, sched_.origin()));
  rt_ = {};
  rt_.trailer.link_length = cfg_.trailer_link;
  last_setpoint_.reset();
  stale_since_ = -1.0;
  camera_.command(now, drone_id(), control::CameraCommand::RecordStart);
}

std::optional<shot::TargetEstimate> DroneAgent::fresh_estimate(
    const std::map<std::string, shot::TargetEstimate>& targets, const std::optional<std::string>& id,
    double now) const {
  if (!id) return std::nullopt;
  auto it = targets.find(*id);
  if (it == targets.end() || now - it->second.stamp > cfg_.stale_target_timeout) return std::nullopt;
  // compensate the report delay with the smoothed velocity
  shot::TargetEstimate e = it->second;
  e.position += e.velocity * std::max(0.0, now - e.stamp);
  e.stamp = now;
  return e;
}

AgentOutput DroneAgent::step(double now, double dt, const Observation& obs,
                             const std::map<std::string, shot::TargetEstimate>& targets,
                             const std::vector<avoid::AgentState>& neighbors) {
  AgentOutput out;
  const control::Pose pose{obs.position, obs.yaw};

  if (!sched_.landed() && sched_.phase() != Phase::Emergency && obs.battery <= cfg_.low_battery) {
    raise_emergency(EmergencyKind::LowBattery, now, obs);
    out.emergency_raised = EmergencyKind::LowBattery;
  }

  sched_.tick(now, obs.position);
  for (auto& line : sched_.drain_log()) {
    if (line.rfind("shot_end:", 0) == 0) camera_.command(now, drone_id(), control::CameraCommand::RecordStop);
    out.log.push_back(std::move(line));
  }

  control::ControllerGains nav_gains = cfg_.shot_gains;
  nav_gains.v_max = cfg_.max_speed;
  Mat3 R_d = control::pan_tilt_rotation(obs.yaw, 0.0);
  Task task = sched_.task();

  if (task.kind == Task::Kind::Shoot && task.shot) {
    const ShootingAction& shot = *task.shot;
    if (exec_shot_ != shot.id || exec_start_ != sched_.shot_start()) start_shot(shot, now);
    const double t = std::min(now - sched_.shot_start(), shot.duration);
    const std::optional<std::string> rt_key =
        shot.rt_mode == RTMode::VirtualPath ? shot.rt_id : (shot.rt_mode == RTMode::ActualTarget ? shot.st_id : std::nullopt);
    const auto rt_est = fresh_estimate(targets, rt_key, now);
    std::optional<shot::TrailerFrame> frame;
    if (shot.rt_mode == RTMode::VirtualTraj || rt_est) {
      frame = shot::rt_frame(shot, rail_, t, rt_est, rt_);
      stale_since_ = -1.0;
    } else if (stale_since_ < 0.0) {
      stale_since_ = now;
    }
    if (!frame && now - stale_since_ > cfg_.stale_target_timeout) {
      raise_emergency(EmergencyKind::GpsLoss, now, obs);
      out.emergency_raised = EmergencyKind::GpsLoss;
      for (auto& line : sched_.drain_log()) out.log.push_back(std::move(line));
      task = sched_.task();
    } else if (frame) {
      std::optional<LocalPoint> st;
      if (shot.st_type == STType::Real) {
        if (auto e = fresh_estimate(targets, shot.st_id, now)) st = e->position;
      } else if (shot.st_type == STType::Virtual) {
        st = frame->position;
      }
      const auto sp = shot::reference_setpoint(shot, *frame, t, st, cfg_.setpoint);
      out.cmd = control::velocity_command(pose, sp, cfg_.shot_gains);
      out.setpoint = sp.position;
      last_setpoint_ = sp.position;
      last_yaw_sp_ = sp.yaw;
      R_d = R_d_;
      if (st) {
        try {
          R_d = control::desired_camera_rotation(obs.position, *st);
        } catch (const SingularError&) {
        }
      } else if (sp.camera_script) {
        R_d = control::pan_tilt_rotation(frame->heading + sp.camera_script->pan, sp.camera_script->tilt);
      }
    } else {
      const LocalPoint hold = last_setpoint_.value_or(obs.position);
      out.cmd = control::velocity_command(pose, hold, last_yaw_sp_, Vec3::Zero(), cfg_.shot_gains);
      out.setpoint = hold;
      R_d = R_d_;
    }
  }

  switch (task.kind) {
    case Task::Kind::Shoot:
      break;
    case Task::Kind::Ground:
      out.cmd = {};
      out.setpoint = obs.position;
      break;
    case Task::Kind::Climb:
    case Task::Kind::Waypoint: {
      const Eigen::Vector2d d = (task.target - obs.position).head<2>();
      const double yaw = d.norm() > 2.0 ? std::atan2(d.y(), d.x()) : obs.yaw;
      out.cmd = control::velocity_command(pose, task.target, yaw, Vec3::Zero(), nav_gains);
      out.setpoint = task.target;
      break;
    }
    case Task::Kind::Hover:
      out.cmd = control::velocity_command(pose, task.target, obs.yaw, Vec3::Zero(), nav_gains);
      out.setpoint = task.target;
      break;
    case Task::Kind::Descend: {
      const Eigen::Vector2d d = (task.target - obs.position).head<2>();
      Vec3 v(nav_gains.K_p * d.x(), nav_gains.K_p * d.y(), -cfg_.land_speed);
      out.cmd.v = control::saturate(v, cfg_.max_speed);
      out.setpoint = LocalPoint(task.target.x(), task.target.y(), 0.0);
      break;
    }
  }
  if (task.kind != Task::Kind::Shoot) {
    exec_shot_.clear();
    exec_start_ = -1.0;
  }

  out.intent_velocity = out.cmd.v;
  const bool airborne = !sched_.landed() && obs.position.z() > cfg_.scheduler.airborne_height;
  if (cfg_.avoidance_enabled && airborne && task.kind != Task::Kind::Descend) {
    std::vector<avoid::AgentState> flying;
    for (const auto& n : neighbors)
      if (n.id != drone_id() && n.position.z() > cfg_.scheduler.airborne_height) flying.push_back(n);
    const avoid::AgentState self{drone_id(), obs.position, out.intent_velocity, now};
    if (auto a = layer_.update(self, obs.yaw, flying, now, cfg_.shot_gains.v_max)) {
      out.cmd.v = a->v;
      out.avoiding = true;
    }
  } else {
    layer_.reset();
  }
  if (out.avoiding != was_avoiding_) out.log.push_back(out.avoiding ? "avoid_start" : "avoid_end");
  was_avoiding_ = out.avoiding;

  R_d_ = R_d;
  const auto g = control::gimbal_rate_command(obs.gimbal_R, R_d_, gimbal_, dt);
  gimbal_ = g.state;
  out.gimbal_rate = g.omega;
  return out;
}

}  // namespace cinedrone::sched
