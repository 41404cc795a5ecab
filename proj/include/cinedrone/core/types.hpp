#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace cinedrone {

// Local ENU frame anchored at the mission origin: x east, y north, z up (meters).
using LocalPoint = Eigen::Vector3d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct GeoPoint {
  double lat = 0.0;  // degrees WGS-84
  double lon = 0.0;  // degrees WGS-84
  double alt = 0.0;  // meters AMSL
  bool operator==(const GeoPoint&) const = default;
};

enum class ShotType { Static, FlyThrough, Elevator, ChaseLead, Flyby, Lateral, Establish, Orbit };
enum class Framing { Long, Medium, CloseUp };
enum class RTMode { VirtualTraj, VirtualPath, ActualTarget };
enum class STType { Virtual, Real, None };

inline constexpr std::array<ShotType, 8> kAllShotTypes = {
    ShotType::Static,    ShotType::FlyThrough, ShotType::Elevator,  ShotType::ChaseLead,
    ShotType::Flyby,     ShotType::Lateral,    ShotType::Establish, ShotType::Orbit};

/// Shot geometry knobs. Angles are radians, angular_speed rad/s, distances meters
/// in the trailer frame (x ahead of the reference target, y to its left, z above it).
struct ShotParameters {
  std::optional<double> pan_s, pan_e, tilt_s, tilt_e;
  std::optional<double> x_s, x_e, y_0;
  std::optional<double> z_0, z_s, z_e;
  std::optional<double> r_0, azimuth_s, angular_speed;
  bool operator==(const ShotParameters&) const = default;
};

struct ParamInfo {
  std::string_view name;
  std::optional<double> ShotParameters::*member;
  bool angular;  // stored in degrees (or deg/s) on disk
};

inline constexpr std::array<ParamInfo, 13> kParamTable = {{
    {"pan_s", &ShotParameters::pan_s, true},
    {"pan_e", &ShotParameters::pan_e, true},
    {"tilt_s", &ShotParameters::tilt_s, true},
    {"tilt_e", &ShotParameters::tilt_e, true},
    {"x_s", &ShotParameters::x_s, false},
    {"x_e", &ShotParameters::x_e, false},
    {"y_0", &ShotParameters::y_0, false},
    {"z_0", &ShotParameters::z_0, false},
    {"z_s", &ShotParameters::z_s, false},
    {"z_e", &ShotParameters::z_e, false},
    {"r_0", &ShotParameters::r_0, false},
    {"azimuth_s", &ShotParameters::azimuth_s, true},
    {"angular_speed", &ShotParameters::angular_speed, true},
}};

struct ShootingAction {
  std::string id;
  ShotType shot_type = ShotType::Static;
  Framing framing = Framing::Long;
  std::optional<std::string> start_event;
  double duration = 0.0;  // seconds of shooting, excluding transit
  std::vector<GeoPoint> rt_path;
  std::optional<double> rt_speed;  // m/s
  RTMode rt_mode = RTMode::VirtualTraj;
  std::optional<std::string> rt_id;
  STType st_type = STType::None;
  std::optional<std::string> st_id;
  ShotParameters params;
  bool operator==(const ShootingAction&) const = default;
};

enum class NavigationKind { TakeOff, Land, GoToWaypoint };

struct NavigationAction {
  NavigationKind kind = NavigationKind::GoToWaypoint;
  std::vector<GeoPoint> waypoints;  // GoToWaypoint only
  double altitude = 0.0;            // TakeOff target height above the local ground plane
  bool operator==(const NavigationAction&) const = default;
};

using Action = std::variant<NavigationAction, ShootingAction>;

struct Event {
  std::string name;
  double timestamp = 0.0;
};

struct Mission {
  GeoPoint origin;
  std::vector<ShootingAction> shots;
  std::map<std::string, double> event_estimates;
  bool operator==(const Mission&) const = default;
};

struct DronePlan {
  std::string drone_id;
  std::vector<Action> actions;
  bool operator==(const DronePlan&) const = default;
};

std::string_view to_string(ShotType t);
std::string_view to_string(Framing f);
std::string_view to_string(RTMode m);
std::string_view to_string(STType s);
std::string_view to_string(NavigationKind k);

std::optional<ShotType> shot_type_from_string(std::string_view s);
std::optional<Framing> framing_from_string(std::string_view s);
std::optional<RTMode> rt_mode_from_string(std::string_view s);
std::optional<STType> st_type_from_string(std::string_view s);
std::optional<NavigationKind> navigation_kind_from_string(std::string_view s);

inline const ShootingAction* as_shot(const Action& a) { return std::get_if<ShootingAction>(&a); }
inline const NavigationAction* as_nav(const Action& a) { return std::get_if<NavigationAction>(&a); }

}  // namespace cinedrone
