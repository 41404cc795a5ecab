#include "cinedrone/gcs/dash_state.hpp"

#include <cstdio>
#include <optional>

#include "cinedrone/core/errors.hpp"

namespace cinedrone::gcs {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void DashStateBuilder::feed(const Json& r) {
  if (!r.contains("kind")) {
    const std::string id = r.at("drone_id").get<std::string>();
    drones_[id] = Json{{"drone_id", id},
                       {"phase", r.at("phase")},
                       {"position", r.at("position")},
                       {"action_index", r.value("action_index", 0)},
                       {"shot_id", r.value("shot_id", Json())},
                       {"battery", r.value("battery", 1.0)}};
    return;
  }
  const std::string kind = r.at("kind").get<std::string>();
  if (kind == "target") {
    const std::string id = r.at("target_id").get<std::string>();
    targets_[id] = Json{{"target_id", id}, {"position", r.at("position")}};
  } else if (kind == "event") {
    fired_.push_back(Json{{"name", r.at("name")}, {"t", r.at("t")}, {"source", r.value("source", "")}});
  } else if (kind == "plan") {
    digest_ = fnv1a64(r.dump(), digest_);
    digest_ = fnv1a64("\n", digest_);
  }
}

Json DashStateBuilder::snapshot(double t) const {
  Json drones = Json::array();
  for (const auto& [_, d] : drones_) drones.push_back(d);
  Json targets = Json::array();
  for (const auto& [_, x] : targets_) targets.push_back(x);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(digest_));
  return Json{{"drones", std::move(drones)},
              {"targets", std::move(targets)},
              {"fired_events", fired_},
              {"plans_digest", std::string(hex)},
              {"t", t}};
}

std::vector<Json> replay_dash_states(std::istream& trace) {
  DashStateBuilder builder;
  std::vector<Json> out;
  std::optional<double> current;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(trace, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json r;
    try {
      r = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError("/" + std::to_string(lineno), std::string("malformed trace line: ") + e.what());
    }
    const double t = r.at("t").get<double>();
    if (current && t != *current) out.push_back(builder.snapshot(*current));
    current = t;
    builder.feed(r);
  }
  if (current) out.push_back(builder.snapshot(*current));
  return out;
}

}  // namespace cinedrone::gcs
