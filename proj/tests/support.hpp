#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cinedrone/core/geo.hpp"
#include "cinedrone/core/types.hpp"
#include "cinedrone/core/validation.hpp"
#include "cinedrone/planner/world_map.hpp"

namespace testsupport {

using namespace cinedrone;

inline const GeoPoint kOrigin{37.3891, -5.9845, 0.0};

inline std::string scenario(const std::string& name) { return std::string(CINEDRONE_SCENARIO_DIR) + "/" + name; }

inline GeoPoint geo(double x, double y, double z = 0.0) { return local_to_geo(LocalPoint(x, y, z), kOrigin); }

/// A shot of the given type carrying exactly the parameters that type requires.
inline ShootingAction make_shot(ShotType type, std::string id = "s1") {
  ShootingAction a;
  a.id = std::move(id);
  a.shot_type = type;
  a.duration = 20.0;
  a.rt_mode = RTMode::VirtualTraj;
  a.rt_path = {geo(0, 0), geo(40, 0)};
  a.rt_speed = 2.0;
  a.st_type = STType::Virtual;
  auto& p = a.params;
  switch (type) {
    case ShotType::Static:
    case ShotType::FlyThrough:
      p.pan_s = 0.0;
      p.pan_e = deg2rad(45.0);
      p.tilt_s = deg2rad(-30.0);
      p.tilt_e = deg2rad(-10.0);
      p.z_0 = 8.0;
      a.st_type = STType::None;
      break;
    case ShotType::Elevator:
      p.z_s = 3.0;
      p.z_e = 20.0;
      break;
    case ShotType::ChaseLead:
      p.x_s = -20.0;
      p.x_e = -10.0;
      p.z_0 = 5.0;
      break;
    case ShotType::Flyby:
      p.x_s = 15.0;
      p.x_e = -15.0;
      p.y_0 = -10.0;
      p.z_0 = 6.0;
      break;
    case ShotType::Lateral:
      p.y_0 = 20.0;
      p.z_0 = 4.0;
      break;
    case ShotType::Establish:
      p.x_s = -30.0;
      p.x_e = -5.0;
      p.z_s = 25.0;
      p.z_e = 6.0;
      break;
    case ShotType::Orbit:
      p.r_0 = 10.0;
      p.azimuth_s = 0.0;
      p.angular_speed = deg2rad(4.5);
      p.z_0 = 8.0;
      break;
  }
  return a;
}

inline planner::Polygon rect(double x0, double y0, double x1, double y1) {
  planner::Polygon p;
  p.vertices = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  p.finalize();
  return p;
}

inline planner::WorldMap open_map(double half = 200.0) {
  planner::WorldMap m;
  m.bounds = {-half, -half, half, half};
  m.base_stations = {LocalPoint(-half + 20, -half + 20, 0)};
  return m;
}

/// Random regular polygon of circumradius `r` around `c`.
inline planner::Polygon random_convex(std::mt19937_64& rng, const Eigen::Vector2d& c, double r) {
  std::uniform_int_distribution<int> nv(3, 7);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const int n = nv(rng);
  const double ph = phase(rng);
  planner::Polygon p;
  for (int k = 0; k < n; ++k) {
    const double a = ph + 2.0 * std::numbers::pi * k / n;
    p.vertices.emplace_back(c.x() + r * std::cos(a), c.y() + r * std::sin(a));
  }
  p.finalize();
  return p;
}

inline bool orthonormal(const Mat3& R, double tol) {
  return (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() < tol && std::abs(R.determinant() - 1.0) < tol;
}

}  // namespace testsupport
