#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cinedrone/core/mission_io.hpp"

namespace cinedrone::gcs {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

/// Folds trace records into the dashboard view. The live session and the replay tool feed
/// it the same records, so both produce the same DASH_STATE payloads.
class DashStateBuilder {
 public:
  void feed(const Json& record);

  /// DASH_STATE payload for the records fed so far.
  Json snapshot(double t) const;

 private:
  std::map<std::string, Json> drones_;
  std::map<std::string, Json> targets_;
  Json fired_ = Json::array();
  std::uint64_t digest_ = fnv1a64("");
};

/// Rebuilds the per-tick DASH_STATE payloads from a trace stream: records are grouped by
/// their `t` in file order and one snapshot is taken after each group.
std::vector<Json> replay_dash_states(std::istream& trace);

}  // namespace cinedrone::gcs
