#include "cinedrone/shot/trailer.hpp"

#include <cmath>

#include "cinedrone/core/errors.hpp"

namespace cinedrone::shot {

TrailerState trailer_update(const TrailerState& s, const LocalPoint& target, double heading_hint) {
  if (!(s.link_length > 0.0)) throw ValidationError("trailer link length must be > 0");
  TrailerState out = s;
  if (!s.initialized) {
    const Eigen::Vector2d u(std::cos(heading_hint), std::sin(heading_hint));
    out.trailer.head<2>() = target.head<2>() - s.link_length * u;
    out.trailer.z() = target.z();
    out.initialized = true;
    return out;
  }
  const Eigen::Vector2d d = target.head<2>() - s.trailer.head<2>();
  const double dist = d.norm();
  if (dist <= 1e-9) return out;
  out.trailer.head<2>() = target.head<2>() - s.link_length * (d / dist);
  out.trailer.z() = target.z();
  return out;
}

double trailer_heading(const TrailerState& s, const LocalPoint& target) {
  const Eigen::Vector2d d = target.head<2>() - s.trailer.head<2>();
  return std::atan2(d.y(), d.x());
}

}  // namespace cinedrone::shot
