#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

// Rosbridge-style JSON frames. The canonical encoding is compact JSON with
// object keys in lexicographic order at every level; encode(decode(f)) == f
// for every canonical frame f.
namespace twinloop::gateway {

enum class Op { kSubscribe, kUnsubscribe, kPublish, kCallService, kServiceResponse, kStatus };

std::string_view to_string(Op op);

struct WireMessage {
  Op op = Op::kPublish;
  std::string name;                // topic or service, always starts with '/'; empty for status
  std::optional<std::string> id;   // correlation id
  std::optional<std::string> type; // message type hint (subscribe/publish)
  nlohmann::json payload;          // publish "msg", call "args", response "values", status "msg"
  bool result = true;              // service_response only
  std::string level = "info";      // status only

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

/// Throws Error(kMalformedFrame) for invalid JSON, unknown ops, missing or
/// mistyped fields, unknown fields and names that do not start with '/'.
WireMessage decode(std::string_view frame);

std::string encode(const WireMessage& message);

/// JSON parse with the frame size and nesting limits decode() applies;
/// nullopt when the text is rejected.
std::optional<nlohmann::json> parse_bounded(std::string_view text);

WireMessage publish(std::string topic, nlohmann::json msg);
WireMessage call_service(std::string service, nlohmann::json args, std::optional<std::string> id = {});
WireMessage service_response(std::string service, nlohmann::json values, bool result,
                             std::optional<std::string> id);
WireMessage status(std::string level, std::string text, std::optional<std::string> id = {});

}  // namespace twinloop::gateway
