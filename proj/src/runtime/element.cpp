#include "twinloop/runtime/element.hpp"

#include "twinloop/common/error.hpp"
#include "twinloop/world/physics.hpp"

namespace twinloop::runtime {

SimulatedElement::SimulatedElement(WorldState truth, SceneConfig config, ElementOptions options)
    : truth_(std::move(truth)), config_(config), options_(options), rng_(options.seed) {}

void SimulatedElement::require_connected() const {
  if (!connected_) throw Error(ErrorCode::kServiceUnavailable, "managed element is not connected");
}

void SimulatedElement::begin_actuation(const bridge::MotionPrimitive& primitive) {
  require_connected();
  const std::size_t index = actuations_++;
  if (options_.drop_service_at && index >= *options_.drop_service_at) {
    connected_ = false;
    throw Error(ErrorCode::kServiceUnavailable,
                "managed element dropped at actuation call " + std::to_string(index));
  }
  if (observer_) observer_(primitive);
}

RobotState SimulatedElement::get_state() {
  std::lock_guard lock(mutex_);
  require_connected();
  return truth_.robot;
}

RobotState SimulatedElement::move_to(Vec3 target) {
  std::lock_guard lock(mutex_);
  begin_actuation(bridge::MotionPrimitive::move_to(target));
  world::move_arm(truth_, target, config_);
  return truth_.robot;
}

RobotState SimulatedElement::set_suction(bool on) {
  std::lock_guard lock(mutex_);
  begin_actuation(bridge::MotionPrimitive::set_suction(on));
  world::switch_suction(truth_, on, config_);
  return truth_.robot;
}

DetectionMessage SimulatedElement::capture(double now_ms) {
  DetectionMessage msg;
  msg.seq = ++seq_;
  msg.stamp_ms = now_ms;
  for (const auto& cube : truth_.cubes) {
    Vec3 c = cube.center;
    if (options_.noise_sigma > 0.0) {
      c.x += options_.noise_sigma * noise_(rng_);
      c.y += options_.noise_sigma * noise_(rng_);
      c.z += options_.noise_sigma * noise_(rng_);
    }
    msg.objects.push_back({cube.tag, cube.color, c});
  }
  last_publish_ms_ = now_ms;
  return msg;
}

std::optional<DetectionMessage> SimulatedElement::poll_detection(double now_ms) {
  std::lock_guard lock(mutex_);
  if (!connected_ || !detector_online_) return std::nullopt;
  if (last_publish_ms_ && now_ms - *last_publish_ms_ < options_.publish_period_ms - 1e-9) {
    return std::nullopt;
  }
  return capture(now_ms);
}

DetectionMessage SimulatedElement::sense(double now_ms) {
  std::lock_guard lock(mutex_);
  require_connected();
  if (!detector_online_) throw Error(ErrorCode::kServiceUnavailable, "object detector is offline");
  return capture(now_ms);
}

WorldState SimulatedElement::truth() const {
  std::lock_guard lock(mutex_);
  return truth_;
}

std::size_t SimulatedElement::actuation_calls() const {
  std::lock_guard lock(mutex_);
  return actuations_;
}

bool SimulatedElement::connected() const {
  std::lock_guard lock(mutex_);
  return connected_;
}

void SimulatedElement::set_detector_online(bool online) {
  std::lock_guard lock(mutex_);
  detector_online_ = online;
}

void SimulatedElement::disconnect() {
  std::lock_guard lock(mutex_);
  connected_ = false;
}

void SimulatedElement::set_actuation_observer(std::function<void(const bridge::MotionPrimitive&)> observer) {
  std::lock_guard lock(mutex_);
  observer_ = std::move(observer);
}

ExecutionReport execute_motions(ElementLink& element, const bridge::MotionQueue& motions) {
  ExecutionReport report;
  for (std::size_t i = 0; i < motions.size(); ++i) {
    const auto& p = motions[i];
    try {
      if (p.kind == bridge::MotionPrimitive::Kind::kMoveTo) {
        element.move_to(p.target);
      } else {
        element.set_suction(p.suction);
      }
      report.results.push_back({p, true});
    } catch (const Error& e) {
      report.results.push_back({p, false});
      report.aborted_at = i;
      report.error = std::string(to_string(e.code())) + ": " + e.what();
      break;
    }
  }
  return report;
}

}  // namespace twinloop::runtime
