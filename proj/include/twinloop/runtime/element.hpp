#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "twinloop/bridge/bridge.hpp"
#include "twinloop/world/types.hpp"

namespace twinloop::runtime {

using world::RobotState;
using world::SceneConfig;
using world::Vec3;
using world::WorldState;

struct DetectedObject {
  std::string tag;
  world::Color color = world::Color::kOther;
  Vec3 center;

  friend bool operator==(const DetectedObject&, const DetectedObject&) = default;
};

struct DetectionMessage {
  std::uint64_t seq = 0;
  double stamp_ms = 0.0;
  std::vector<DetectedObject> objects;  // sorted by tag

  friend bool operator==(const DetectionMessage&, const DetectionMessage&) = default;
};

/// The managed element as the runtime sees it: two actuation services, a
/// state service and the object detector. Every call may throw
/// Error(kServiceUnavailable).
class ElementLink {
 public:
  virtual ~ElementLink() = default;

  virtual RobotState get_state() = 0;
  /// Throws Error(kOutOfWorkspace) for unreachable targets.
  virtual RobotState move_to(Vec3 target) = 0;
  virtual RobotState set_suction(bool on) = 0;

  /// Next periodic detector message, if one is due at `now_ms`.
  virtual std::optional<DetectionMessage> poll_detection(double now_ms) = 0;
  /// Immediate detector capture.
  virtual DetectionMessage sense(double now_ms) = 0;
};

struct ElementOptions {
  double noise_sigma = 0.0;  // mm, per axis
  std::uint64_t seed = 1;
  double publish_period_ms = 100.0;
  /// Actuation calls with index >= N fail and leave the element disconnected.
  std::optional<std::size_t> drop_service_at;
};

/// In-process stand-in for the arm and the camera: owns the ground-truth
/// world and steps it with the shared suction physics. Thread safe.
class SimulatedElement : public ElementLink {
 public:
  SimulatedElement(WorldState truth, SceneConfig config, ElementOptions options = {});

  RobotState get_state() override;
  RobotState move_to(Vec3 target) override;
  RobotState set_suction(bool on) override;
  std::optional<DetectionMessage> poll_detection(double now_ms) override;
  DetectionMessage sense(double now_ms) override;

  WorldState truth() const;
  std::size_t actuation_calls() const;
  bool connected() const;
  void set_detector_online(bool online);
  void disconnect();

  /// Called (under the element lock) before every actuation.
  void set_actuation_observer(std::function<void(const bridge::MotionPrimitive&)> observer);

 private:
  void require_connected() const;
  void begin_actuation(const bridge::MotionPrimitive& primitive);
  DetectionMessage capture(double now_ms);

  mutable std::mutex mutex_;
  WorldState truth_;
  SceneConfig config_;
  ElementOptions options_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  std::size_t actuations_ = 0;
  bool connected_ = true;
  bool detector_online_ = true;
  std::optional<double> last_publish_ms_;
  std::uint64_t seq_ = 0;
  std::function<void(const bridge::MotionPrimitive&)> observer_;
};

struct PrimitiveResult {
  bridge::MotionPrimitive primitive;
  bool ok = false;
};

struct ExecutionReport {
  std::vector<PrimitiveResult> results;
  std::optional<std::size_t> aborted_at;
  std::string error;

  bool ok() const { return !aborted_at.has_value(); }
};

/// Sends the primitives one by one, each acknowledged before the next. The
/// first failure stops the run; it is reported as aborted at that index.
ExecutionReport execute_motions(ElementLink& element, const bridge::MotionQueue& motions);

}  // namespace twinloop::runtime
