#include "twinloop/gateway/protocol.hpp"

#include <array>
#include <set>

#include "twinloop/common/error.hpp"

namespace twinloop::gateway {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxFrameBytes = 1 << 20;
constexpr int kMaxDepth = 64;

struct OpInfo {
  Op op;
  std::string_view name;
  std::string_view name_key;  // "topic" / "service" / ""
};

constexpr std::array<OpInfo, 6> kOps{{
    {Op::kSubscribe, "subscribe", "topic"},
    {Op::kUnsubscribe, "unsubscribe", "topic"},
    {Op::kPublish, "publish", "topic"},
    {Op::kCallService, "call_service", "service"},
    {Op::kServiceResponse, "service_response", "service"},
    {Op::kStatus, "status", ""},
}};

const OpInfo& info(Op op) {
  for (const auto& i : kOps)
    if (i.op == op) return i;
  throw Error(ErrorCode::kMalformedFrame, "unknown op");
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kMalformedFrame, what); }

// nlohmann parses recursively; refuse pathological nesting before it does.
bool depth_ok(std::string_view text) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (char c : text) {
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{' || c == '[') {
      if (++depth > kMaxDepth) return false;
    } else if (c == '}' || c == ']') {
      --depth;
    }
  }
  return true;
}

std::string string_field(const json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end()) bad("missing field '" + std::string(key) + "'");
  if (!it->is_string()) bad("field '" + std::string(key) + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  if (!it->is_string()) bad("field '" + std::string(key) + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(Op op) { return info(op).name; }

std::optional<nlohmann::json> parse_bounded(std::string_view text) {
  if (text.size() > kMaxFrameBytes || !depth_ok(text)) return std::nullopt;
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

WireMessage decode(std::string_view frame) {
  if (frame.size() > kMaxFrameBytes) bad("frame too large");
  if (!depth_ok(frame)) bad("nesting too deep");
  json j = json::parse(frame, nullptr, false);
  if (j.is_discarded()) bad("invalid JSON");
  if (!j.is_object()) bad("frame must be a JSON object");

  const std::string op_name = string_field(j, "op");
  const OpInfo* op = nullptr;
  for (const auto& i : kOps)
    if (i.name == op_name) op = &i;
  if (!op) bad("unknown op '" + op_name + "'");

  std::set<std::string, std::less<>> allowed{"op", "id"};
  WireMessage m;
  m.op = op->op;
  m.id = optional_string(j, "id");

  if (!op->name_key.empty()) {
    allowed.emplace(op->name_key);
    m.name = string_field(j, op->name_key);
    if (m.name.empty() || m.name.front() != '/') bad("name must start with '/': " + m.name);
  }

  switch (op->op) {
    case Op::kSubscribe:
    case Op::kUnsubscribe:
    case Op::kPublish:
      allowed.emplace("type");
      m.type = optional_string(j, "type");
      break;
    default:
      break;
  }

  switch (op->op) {
    case Op::kPublish: {
      allowed.emplace("msg");
      auto it = j.find("msg");
      if (it == j.end()) bad("missing field 'msg'");
      m.payload = *it;
      break;
    }
    case Op::kCallService: {
      allowed.emplace("args");
      auto it = j.find("args");
      m.payload = it == j.end() ? json::object() : *it;
      if (!m.payload.is_object()) bad("'args' must be an object");
      break;
    }
    case Op::kServiceResponse: {
      allowed.insert({"values", "result"});
      auto it = j.find("result");
      if (it == j.end() || !it->is_boolean()) bad("'result' must be a boolean");
      m.result = it->get<bool>();
      auto v = j.find("values");
      m.payload = v == j.end() ? json::object() : *v;
      break;
    }
    case Op::kStatus: {
      allowed.insert({"level", "msg"});
      m.level = string_field(j, "level");
      m.payload = string_field(j, "msg");
      break;
    }
    default:
      break;
  }

  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.contains(key)) bad("unknown field '" + key + "'");
  }
  return m;
}

std::string encode(const WireMessage& m) {
  const OpInfo& op = info(m.op);
  json j = json::object();
  j["op"] = op.name;
  if (m.id) j["id"] = *m.id;
  if (!op.name_key.empty()) j[std::string(op.name_key)] = m.name;
  if (m.type && (m.op == Op::kSubscribe || m.op == Op::kUnsubscribe || m.op == Op::kPublish))
    j["type"] = *m.type;
  switch (m.op) {
    case Op::kPublish:
      j["msg"] = m.payload;
      break;
    case Op::kCallService:
      j["args"] = m.payload.is_null() ? json::object() : m.payload;
      break;
    case Op::kServiceResponse:
      j["values"] = m.payload.is_null() ? json::object() : m.payload;
      j["result"] = m.result;
      break;
    case Op::kStatus:
      j["level"] = m.level;
      j["msg"] = m.payload.is_string() ? m.payload : json(m.payload.dump());
      break;
    default:
      break;
  }
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

WireMessage publish(std::string topic, nlohmann::json msg) {
  WireMessage m;
  m.op = Op::kPublish;
  m.name = std::move(topic);
  m.payload = std::move(msg);
  return m;
}

WireMessage call_service(std::string service, nlohmann::json args, std::optional<std::string> id) {
  WireMessage m;
  m.op = Op::kCallService;
  m.name = std::move(service);
  m.payload = std::move(args);
  m.id = std::move(id);
  return m;
}

WireMessage service_response(std::string service, nlohmann::json values, bool result,
                             std::optional<std::string> id) {
  WireMessage m;
  m.op = Op::kServiceResponse;
  m.name = std::move(service);
  m.payload = std::move(values);
  m.result = result;
  m.id = std::move(id);
  return m;
}

WireMessage status(std::string level, std::string text, std::optional<std::string> id) {
  WireMessage m;
  m.op = Op::kStatus;
  m.level = std::move(level);
  m.payload = std::move(text);
  m.id = std::move(id);
  return m;
}

}  // namespace twinloop::gateway
