#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "twinloop/metrics/session_log.hpp"

namespace twinloop::metrics {

/// Seconds from the strategy's start marker to the last execute click.
/// Procedural sessions start at the first record click, declarative ones at
/// the switch to declarative control. nullopt when nothing was executed.
/// Throws Error(kMalformedLog) for non-monotone timestamps or a missing start.
std::optional<double> completion_time(const SessionLog& log);

/// Mean over sessions that have a time. Throws Error(kNoCompletedSessions).
double efficiency(std::span<const std::optional<double>> times);

/// 100 * sum(T) / (per_participant * n). Throws Error(kRangeError) when a
/// count is outside [0, per_participant] or there are no participants.
double effectiveness(std::span<const int> completed, int per_participant = 3);

inline constexpr std::size_t kSusItems = 10;
inline constexpr std::size_t kPresenceItems = 7;
inline constexpr std::size_t kReversedPresenceItem = 5;  // PQ6, zero based

/// Standard SUS: odd items contribute a-1, even items 5-a, sum times 2.5.
/// Throws Error(kRangeError) unless there are ten answers in 1..5.
double sus_score(std::span<const int> answers);

struct PresenceScore {
  int total = 0;
  int percent = 0;  // round half away from zero of 100 * total / 49
};

/// PQ6 is reversed (8 - a). Throws Error(kRangeError) unless there are seven
/// answers in 1..7.
PresenceScore presence_score(std::span<const int> answers);

/// Column means rounded to one decimal.
std::vector<double> item_averages(const std::vector<std::vector<int>>& rows);

double round_to(double value, int decimals);

}  // namespace twinloop::metrics
