#include "cinedrone/core/types.hpp"

namespace cinedrone {
namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s) {
  for (const auto& [value, name] : table)
    if (name == s) return value;
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E v) {
  for (const auto& [value, name] : table)
    if (value == v) return name;
  return "?";
}

constexpr std::array<std::pair<ShotType, std::string_view>, 8> kShotNames = {{
    {ShotType::Static, "static"},
    {ShotType::FlyThrough, "fly_through"},
    {ShotType::Elevator, "elevator"},
    {ShotType::ChaseLead, "chase_lead"},
    {ShotType::Flyby, "flyby"},
    {ShotType::Lateral, "lateral"},
    {ShotType::Establish, "establish"},
    {ShotType::Orbit, "orbit"},
}};

constexpr std::array<std::pair<Framing, std::string_view>, 3> kFramingNames = {{
    {Framing::Long, "long"},
    {Framing::Medium, "medium"},
    {Framing::CloseUp, "close_up"},
}};

constexpr std::array<std::pair<RTMode, std::string_view>, 3> kRtModeNames = {{
    {RTMode::VirtualTraj, "virtual_traj"},
    {RTMode::VirtualPath, "virtual_path"},
    {RTMode::ActualTarget, "actual_target"},
}};

constexpr std::array<std::pair<STType, std::string_view>, 3> kStTypeNames = {{
    {STType::Virtual, "virtual"},
    {STType::Real, "real"},
    {STType::None, "none"},
}};

constexpr std::array<std::pair<NavigationKind, std::string_view>, 3> kNavNames = {{
    {NavigationKind::TakeOff, "take_off"},
    {NavigationKind::Land, "land"},
    {NavigationKind::GoToWaypoint, "go_to_waypoint"},
}};

}  // namespace

std::string_view to_string(ShotType t) { return name_of(kShotNames, t); }
std::string_view to_string(Framing f) { return name_of(kFramingNames, f); }
std::string_view to_string(RTMode m) { return name_of(kRtModeNames, m); }
std::string_view to_string(STType s) { return name_of(kStTypeNames, s); }
std::string_view to_string(NavigationKind k) { return name_of(kNavNames, k); }

std::optional<ShotType> shot_type_from_string(std::string_view s) { return lookup(kShotNames, s); }
std::optional<Framing> framing_from_string(std::string_view s) { return lookup(kFramingNames, s); }
std::optional<RTMode> rt_mode_from_string(std::string_view s) { return lookup(kRtModeNames, s); }
std::optional<STType> st_type_from_string(std::string_view s) { return lookup(kStTypeNames, s); }
std::optional<NavigationKind> navigation_kind_from_string(std::string_view s) { return lookup(kNavNames, s); }

}  // namespace cinedrone
