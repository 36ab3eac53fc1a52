#include "twinloop/runtime/host.hpp"

#include <chrono>

namespace twinloop::runtime {

Host::Host(Runtime& runtime, Sink sink) : runtime_(runtime), sink_(std::move(sink)) {}

Host::~Host() { stop(); }

void Host::start() {
  if (running_.exchange(true)) return;
  thread_ = std::thread([this] { loop(); });
}

void Host::stop() {
  running_ = false;
  if (thread_.joinable()) thread_.join();
}

void Host::flush() {
  auto events = runtime_.drain_events();
  if (!events.empty() && sink_) sink_(std::move(events));
}

void Host::loop() {
  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::duration<double, std::milli>(runtime_.config().tick_ms);
  auto last = clock::now();
  while (running_) {
    std::this_thread::sleep_for(period);
    const auto now = clock::now();
    const double elapsed = std::chrono::duration<double, std::milli>(now - last).count();
    last = now;
    std::lock_guard lock(mutex_);
    runtime_.advance(elapsed);
    flush();
  }
}

}  // namespace twinloop::runtime
