#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "twinloop/runtime/runtime.hpp"

namespace twinloop::gateway {

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 9090;  // 0 picks a free port
};

/// WebSocket front end: one text frame per WireMessage. Owns the Host that
/// drives `runtime` against the wall clock and a Gateway between the two.
class Server {
 public:
  Server(runtime::Runtime& runtime, ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds, then serves on background threads. Throws Error(kPortInUse).
  void start();
  void stop();
  /// Blocks until stop() is called from elsewhere (e.g. a signal handler).
  void wait();

  std::uint16_t port() const;
  std::size_t client_count() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace twinloop::gateway
