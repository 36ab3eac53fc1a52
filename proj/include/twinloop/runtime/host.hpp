#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "twinloop/runtime/runtime.hpp"

namespace twinloop::runtime {

/// Runs a Runtime against the wall clock on its own thread. All access goes
/// through with_runtime(), which serializes callers with the loop; events
/// produced by a call or a tick are handed to the sink before the lock is
/// released, so subscribers see them in order.
class Host {
 public:
  using Sink = std::function<void(std::vector<RuntimeEvent>)>;

  Host(Runtime& runtime, Sink sink);
  ~Host();

  Host(const Host&) = delete;
  Host& operator=(const Host&) = delete;

  void start();
  void stop();

  template <class F>
  decltype(auto) with_runtime(F&& f) {
    std::lock_guard lock(mutex_);
    struct Flush {
      Host& host;
      ~Flush() { host.flush(); }
    } flush{*this};
    return f(runtime_);
  }

 private:
  void flush();
  void loop();

  Runtime& runtime_;
  Sink sink_;
  std::mutex mutex_;
  std::atomic<bool> running_{false};
  std::thread thread_;
};

}  // namespace twinloop::runtime
