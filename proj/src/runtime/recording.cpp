#include "twinloop/runtime/recording.hpp"

#include <optional>

namespace twinloop::runtime {

void Recording::start(const RecordedState& initial) {
  entries_.clear();
  entries_.push_back(initial);
  status_ = RecordingStatus::kRecording;
}

bool Recording::observe(const RecordedState& state) {
  if (status_ != RecordingStatus::kRecording) return false;
  const auto& last = entries_.back();
  if (state.suction != last.suction || world::distance(state.effector, last.effector) >= sample_distance_) {
    entries_.push_back(state);
    return true;
  }
  return false;
}

void Recording::stop(const RecordedState& final_state) {
  if (status_ != RecordingStatus::kRecording) return;
  if (entries_.back() != final_state) entries_.push_back(final_state);
  status_ = RecordingStatus::kStopped;
}

void Recording::clear() {
  entries_.clear();
  status_ = RecordingStatus::kEmpty;
}

bridge::MotionQueue to_motions(const std::vector<RecordedState>& entries, bool initial_suction) {
  bridge::MotionQueue queue;
  bool suction = initial_suction;
  std::optional<Vec3> at;
  for (const auto& e : entries) {
    if (!at || *at != e.effector) {
      queue.push_back(bridge::MotionPrimitive::move_to(e.effector));
      at = e.effector;
    }
    if (e.suction != suction) {
      queue.push_back(bridge::MotionPrimitive::set_suction(e.suction));
      suction = e.suction;
    }
  }
  return queue;
}

}  // namespace twinloop::runtime
