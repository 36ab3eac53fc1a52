#pragma once

#include <cstddef>
#include <vector>

#include "twinloop/bridge/bridge.hpp"
#include "twinloop/world/types.hpp"

namespace twinloop::runtime {

using world::Vec3;

struct RecordedState {
  Vec3 effector;
  bool suction = false;

  friend bool operator==(const RecordedState&, const RecordedState&) = default;
};

enum class RecordingStatus { kEmpty, kRecording, kStopped };

/// Queue of sampled robot states. While recording, a state is appended when
/// the effector has moved at least `sample_distance` from the last entry or
/// the suction flag changed.
class Recording {
 public:
  explicit Recording(double sample_distance = 5.0) : sample_distance_(sample_distance) {}

  /// Clears the queue and stores `initial` as the first entry.
  void start(const RecordedState& initial);
  /// No-op unless recording. Returns true when `state` was appended.
  bool observe(const RecordedState& state);
  /// Appends `final_state` when it differs from the last entry, then freezes.
  void stop(const RecordedState& final_state);
  void clear();

  RecordingStatus status() const { return status_; }
  const std::vector<RecordedState>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double sample_distance() const { return sample_distance_; }

 private:
  double sample_distance_;
  RecordingStatus status_ = RecordingStatus::kEmpty;
  std::vector<RecordedState> entries_;
};

/// Primitive sequence that reproduces the recording starting from a robot
/// whose suction is `initial_suction`: a move to every entry, and a suction
/// switch wherever the flag changes.
bridge::MotionQueue to_motions(const std::vector<RecordedState>& entries, bool initial_suction = false);

}  // namespace twinloop::runtime
