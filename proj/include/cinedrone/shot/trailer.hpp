#pragma once

#include "cinedrone/core/types.hpp"

namespace cinedrone::shot {

/// A virtual trailer dragged behind the reference target on a rigid horizontal link.
/// Its position is a low-pass version of the target track and the link direction gives
/// a path-tangent heading that is far less sensitive to positioning noise than raw
/// finite differences.
struct TrailerState {
  LocalPoint trailer = LocalPoint::Zero();
  double link_length = 3.0;
  bool initialized = false;
};

/// One drag step. The first call places the trailer `link_length` behind the target along
/// `heading_hint`; later calls pull it along the link. The trailer's z follows the target.
TrailerState trailer_update(const TrailerState& s, const LocalPoint& target, double heading_hint = 0.0);

/// Heading of the link from trailer to target (ENU yaw, radians).
double trailer_heading(const TrailerState& s, const LocalPoint& target);

}  // namespace cinedrone::shot
