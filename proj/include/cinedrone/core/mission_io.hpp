#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "cinedrone/core/types.hpp"

namespace cinedrone {

using Json = nlohmann::json;

// Mission files are strict: unknown fields are rejected, angles are degrees on disk and
// radians in memory. Every failure is a ParseError naming the JSON pointer involved.
Mission parse_mission(std::string_view bytes);
std::string serialize_mission(const Mission& m);

Mission mission_from_json(const Json& j);
Json mission_to_json(const Mission& m);

ShootingAction shot_from_json(const Json& j, const std::string& path);
Json shot_to_json(const ShootingAction& a);

Action action_from_json(const Json& j, const std::string& path);
Json action_to_json(const Action& a);

DronePlan plan_from_json(const Json& j, const std::string& path = "");
Json plan_to_json(const DronePlan& p);

GeoPoint geo_from_json(const Json& j, const std::string& path);
Json geo_to_json(const GeoPoint& g);

LocalPoint local_from_json(const Json& j, const std::string& path);
Json local_to_json(const LocalPoint& p);

Mission load_mission_file(const std::string& filename);
std::string read_text_file(const std::string& filename);

}  // namespace cinedrone
