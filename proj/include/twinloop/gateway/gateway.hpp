#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "twinloop/gateway/protocol.hpp"
#include "twinloop/runtime/runtime.hpp"

namespace twinloop::gateway {

using ClientId = std::uint64_t;

inline constexpr std::string_view kTopicObjects = "/world/objects";
inline constexpr std::string_view kTopicTwin = "/world/twin";
inline constexpr std::string_view kTopicMode = "/session/mode";
inline constexpr std::string_view kTopicCamera = "/camera/meta";

const std::vector<std::string_view>& topics();
const std::vector<std::string_view>& services();

/// Transport-independent protocol endpoint. Frames from every connection go
/// through on_frame() with the runtime lock held (Host::with_runtime), which
/// serializes commands; runtime events fan out through on_events(). Replies
/// and publications leave through the send callback, which must not block.
class Gateway {
 public:
  using Send = std::function<void(ClientId, const std::string& frame)>;

  explicit Gateway(Send send);

  void connect(ClientId client);
  void disconnect(ClientId client);

  /// Never throws for bad input: malformed frames and failing services are
  /// answered with a status or a service_response carrying result=false.
  void on_frame(ClientId client, std::string_view frame, runtime::Runtime& runtime);

  void on_events(const std::vector<runtime::RuntimeEvent>& events);

  /// Handles one service call and returns its response (used by on_frame and
  /// by headless scripts).
  WireMessage call(const WireMessage& request, runtime::Runtime& runtime);

  std::set<std::string> subscriptions(ClientId client) const;

 private:
  void send(ClientId client, const WireMessage& message);
  void handle(ClientId client, const WireMessage& message, runtime::Runtime& runtime);

  Send send_;
  mutable std::mutex mutex_;
  std::set<ClientId> clients_;
  std::map<std::string, std::set<ClientId>, std::less<>> subscribers_;
};

/// The publish message a runtime event becomes.
WireMessage to_message(const runtime::RuntimeEvent& event);

/// Snapshot messages sent to a new subscriber of a latched topic.
std::optional<WireMessage> latched(std::string_view topic, const runtime::Runtime& runtime);

}  // namespace twinloop::gateway
