#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cinedrone/core/types.hpp"

namespace cinedrone {

struct Finding {
  std::string shot_id;  // empty for mission-level findings
  std::string rule;
  bool operator==(const Finding&) const = default;
};

/// Parameter names each shot type takes, in canonical order.
std::vector<std::string_view> required_params(ShotType t);

std::vector<Finding> validate_shot(const ShootingAction& a);

/// Empty iff every shot carries exactly its shot type's parameter set, satisfies the
/// reference/shooting target mode rules, and every start event has a time estimate.
std::vector<Finding> validate_mission(const Mission& m);

std::string to_string(const Finding& f);

}  // namespace cinedrone
