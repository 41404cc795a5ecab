#include "cinedrone/gcs/wire.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>

#include "cinedrone/core/errors.hpp"
#include "cinedrone/sched/scheduler.hpp"

namespace cinedrone::gcs {
namespace {

constexpr std::array<std::pair<MsgType, std::string_view>, 8> kNames = {{
    {MsgType::PLAN, "PLAN"},
    {MsgType::EVENT, "EVENT"},
    {MsgType::STOP, "STOP"},
    {MsgType::STATUS, "STATUS"},
    {MsgType::EMERGENCY, "EMERGENCY"},
    {MsgType::REPLAN_NOTICE, "REPLAN_NOTICE"},
    {MsgType::DASH_STATE, "DASH_STATE"},
    {MsgType::DASH_CMD, "DASH_CMD"},
}};

struct Field {
  std::string_view name;
  bool required;
};

void check_fields(const Json& j, const std::string& path, std::initializer_list<Field> fields) {
  if (!j.is_object()) throw ParseError(path.empty() ? "/" : path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(fields.begin(), fields.end(), [&](const Field& f) { return f.name == it.key(); });
    if (!known) throw ParseError(path + "/" + it.key(), "unknown field");
  }
  for (const auto& f : fields)
    if (f.required && !j.contains(f.name)) throw ParseError(path + "/" + std::string(f.name), "missing required field");
}

void need_string(const Json& j, const std::string& path, bool nonempty = false) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  if (nonempty && j.get_ref<const std::string&>().empty()) throw ParseError(path, "must be nonempty");
}

void need_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
}

void need_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
}

void need_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
}

void need_vector(const Json& j, const std::string& path) {
  local_from_json(j, path);
}

}  // namespace

std::string_view to_string(MsgType t) {
  for (const auto& [k, n] : kNames)
    if (k == t) return n;
  return "?";
}

std::optional<MsgType> msg_type_from_string(std::string_view s) {
  for (const auto& [k, n] : kNames)
    if (n == s) return k;
  return std::nullopt;
}

void validate_payload(MsgType type, const Json& p) {
  const std::string root = "/payload";
  switch (type) {
    case MsgType::PLAN:
      check_fields(p, root, {{"drone_id", true}, {"actions", true}, {"rev", false}});
      need_string(p["drone_id"], root + "/drone_id", true);
      need_array(p["actions"], root + "/actions");
      for (std::size_t i = 0; i < p["actions"].size(); ++i)
        action_from_json(p["actions"][i], root + "/actions/" + std::to_string(i));
      if (p.contains("rev")) need_integer(p["rev"], root + "/rev");
      break;
    case MsgType::EVENT:
      check_fields(p, root, {{"name", true}, {"t", true}, {"source", false}});
      need_string(p["name"], root + "/name", true);
      need_number(p["t"], root + "/t");
      if (p.contains("source")) need_string(p["source"], root + "/source");
      break;
    case MsgType::STOP:
      check_fields(p, root, {{"drone_id", false}});
      if (p.contains("drone_id")) need_string(p["drone_id"], root + "/drone_id", true);
      break;
    case MsgType::STATUS:
      check_fields(p, root,
                   {{"drone_id", true}, {"phase", true}, {"action_index", true}, {"position", true},
                    {"battery", true}, {"t", true}, {"velocity", false}, {"intent_velocity", false},
                    {"shot_id", false}, {"plan_rev", false}, {"note", false}});
      need_string(p["drone_id"], root + "/drone_id", true);
      need_string(p["phase"], root + "/phase");
      if (!sched::phase_from_string(p["phase"].get<std::string>())) throw ParseError(root + "/phase", "unknown phase");
      need_integer(p["action_index"], root + "/action_index");
      need_vector(p["position"], root + "/position");
      need_number(p["battery"], root + "/battery");
      if (p["battery"].get<double>() < 0.0 || p["battery"].get<double>() > 1.0)
        throw ParseError(root + "/battery", "must lie in [0, 1]");
      need_number(p["t"], root + "/t");
      if (p.contains("velocity")) need_vector(p["velocity"], root + "/velocity");
      if (p.contains("intent_velocity")) need_vector(p["intent_velocity"], root + "/intent_velocity");
      if (p.contains("shot_id") && !p["shot_id"].is_null()) need_string(p["shot_id"], root + "/shot_id");
      if (p.contains("plan_rev")) need_integer(p["plan_rev"], root + "/plan_rev");
      if (p.contains("note")) need_string(p["note"], root + "/note");
      break;
    case MsgType::EMERGENCY:
      check_fields(p, root, {{"drone_id", true}, {"kind", true}, {"t", true}});
      need_string(p["drone_id"], root + "/drone_id", true);
      need_string(p["kind"], root + "/kind");
      if (!sched::emergency_kind_from_string(p["kind"].get<std::string>()))
        throw ParseError(root + "/kind", "unknown emergency kind");
      need_number(p["t"], root + "/t");
      break;
    case MsgType::REPLAN_NOTICE:
      check_fields(p, root, {{"failed", true}, {"t", true}});
      need_array(p["failed"], root + "/failed");
      for (std::size_t i = 0; i < p["failed"].size(); ++i)
        need_string(p["failed"][i], root + "/failed/" + std::to_string(i), true);
      need_number(p["t"], root + "/t");
      break;
    case MsgType::DASH_STATE:
      check_fields(p, root,
                   {{"drones", true}, {"targets", true}, {"fired_events", true}, {"plans_digest", true}, {"t", false}});
      need_array(p["drones"], root + "/drones");
      need_array(p["targets"], root + "/targets");
      need_array(p["fired_events"], root + "/fired_events");
      need_string(p["plans_digest"], root + "/plans_digest");
      if (p.contains("t")) need_number(p["t"], root + "/t");
      break;
    case MsgType::DASH_CMD: {
      check_fields(p, root, {{"op", true}, {"args", false}});
      need_string(p["op"], root + "/op");
      const auto& op = p["op"].get_ref<const std::string&>();
      const Json args = p.value("args", Json::object());
      if (!args.is_object()) throw ParseError(root + "/args", "expected an object");
      if (op == "fire_event") {
        check_fields(args, root + "/args", {{"name", true}});
        need_string(args["name"], root + "/args/name", true);
      } else if (op == "fail_drone") {
        check_fields(args, root + "/args", {{"drone_id", true}, {"kind", false}});
        need_string(args["drone_id"], root + "/args/drone_id", true);
        if (args.contains("kind")) {
          need_string(args["kind"], root + "/args/kind");
          if (!sched::emergency_kind_from_string(args["kind"].get<std::string>()))
            throw ParseError(root + "/args/kind", "unknown emergency kind");
        }
      } else if (op == "stop") {
        check_fields(args, root + "/args", {{"drone_id", false}});
        if (args.contains("drone_id")) need_string(args["drone_id"], root + "/args/drone_id", true);
      } else {
        throw ParseError(root + "/op", "unknown op " + op);
      }
      break;
    }
  }
}

Json to_json(const WireMessage& m) {
  Json j{{"type", std::string(to_string(m.type))}, {"seq", m.seq}, {"sender", m.sender}};
  if (!m.to.empty()) j["to"] = m.to;
  j["payload"] = m.payload;
  return j;
}

WireMessage message_from_json(const Json& j) {
  check_fields(j, "", {{"type", true}, {"seq", true}, {"sender", true}, {"to", false}, {"payload", true}});
  need_string(j["type"], "/type");
  const auto type = msg_type_from_string(j["type"].get<std::string>());
  if (!type) throw ParseError("/type", "unknown message type");
  if (!j["seq"].is_number_unsigned()) throw ParseError("/seq", "expected a non-negative integer");
  need_string(j["sender"], "/sender", true);
  WireMessage m;
  m.type = *type;
  m.seq = j["seq"].get<std::uint64_t>();
  m.sender = j["sender"].get<std::string>();
  if (j.contains("to")) {
    need_array(j["to"], "/to");
    for (std::size_t i = 0; i < j["to"].size(); ++i) {
      need_string(j["to"][i], "/to/" + std::to_string(i), true);
      m.to.push_back(j["to"][i].get<std::string>());
    }
  }
  validate_payload(m.type, j["payload"]);
  m.payload = j["payload"];
  return m;
}

std::string encode(const WireMessage& m) { return to_json(m).dump(); }

WireMessage decode(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line.begin(), line.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("/", std::string("malformed JSON: ") + e.what());
  }
  return message_from_json(j);
}

}  // namespace cinedrone::gcs
