#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cinedrone/core/mission_io.hpp"

namespace cinedrone::gcs {

enum class MsgType { PLAN, EVENT, STOP, STATUS, EMERGENCY, REPLAN_NOTICE, DASH_STATE, DASH_CMD };

std::string_view to_string(MsgType t);
std::optional<MsgType> msg_type_from_string(std::string_view s);

/// Envelope: {"type", "seq", "sender", "to"?, "payload"}. `to` restricts delivery; an
/// empty list means broadcast.
struct WireMessage {
  MsgType type = MsgType::STATUS;
  std::uint64_t seq = 0;
  std::string sender;
  std::vector<std::string> to;
  Json payload = Json::object();
};

/// Checks a payload against the schema of its message type; throws ParseError naming the
/// offending JSON pointer.
void validate_payload(MsgType type, const Json& payload);

Json to_json(const WireMessage& m);
WireMessage message_from_json(const Json& j);

/// Single line without the trailing newline.
std::string encode(const WireMessage& m);
WireMessage decode(std::string_view line);

}  // namespace cinedrone::gcs
