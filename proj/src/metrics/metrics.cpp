#include "twinloop/metrics/metrics.hpp"

#include <cmath>
#include <numeric>

#include "twinloop/common/error.hpp"

namespace twinloop::metrics {
namespace {

void require_answers(std::span<const int> answers, std::size_t count, int max, const char* what) {
  if (answers.size() != count) {
    throw Error(ErrorCode::kRangeError, std::string(what) + " needs " + std::to_string(count) +
                                            " answers, got " + std::to_string(answers.size()));
  }
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (answers[i] < 1 || answers[i] > max) {
      throw Error(ErrorCode::kRangeError, std::string(what) + " answer " + std::to_string(i + 1) +
                                              " = " + std::to_string(answers[i]) +
                                              " outside 1.." + std::to_string(max));
    }
  }
}

}  // namespace

std::optional<double> completion_time(const SessionLog& log) {
  for (std::size_t i = 1; i < log.events.size(); ++i) {
    if (log.events[i].t < log.events[i - 1].t) {
      throw Error(ErrorCode::kMalformedLog, "timestamp goes backwards at event " + std::to_string(i));
    }
  }
  std::optional<double> start;
  std::optional<double> end;
  for (const auto& e : log.events) {
    const bool starts =
        log.strategy == Strategy::kProcedural
            ? e.kind == event::kRecordClick
            : e.kind == event::kModeSwitch && e.data.value("to", "") == "declarative";
    if (starts && !start) start = e.t;
    if (e.kind == event::kExecuteClick) end = e.t;
  }
  if (!end) return std::nullopt;
  if (!start) {
    throw Error(ErrorCode::kMalformedLog, "execute click without a start marker");
  }
  if (*end < *start) {
    throw Error(ErrorCode::kMalformedLog, "execute click precedes the start marker");
  }
  return *end - *start;
}

double efficiency(std::span<const std::optional<double>> times) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& t : times) {
    if (!t) continue;
    sum += *t;
    ++n;
  }
  if (n == 0) throw Error(ErrorCode::kNoCompletedSessions, "no session has a completion time");
  return sum / static_cast<double>(n);
}

double effectiveness(std::span<const int> completed, int per_participant) {
  if (completed.empty() || per_participant <= 0) {
    throw Error(ErrorCode::kRangeError, "effectiveness needs at least one participant");
  }
  for (int c : completed) {
    if (c < 0 || c > per_participant) {
      throw Error(ErrorCode::kRangeError, "sub-task count " + std::to_string(c) + " outside 0.." +
                                              std::to_string(per_participant));
    }
  }
  const int total = std::accumulate(completed.begin(), completed.end(), 0);
  return 100.0 * total / (static_cast<double>(per_participant) * static_cast<double>(completed.size()));
}

double sus_score(std::span<const int> answers) {
  require_answers(answers, kSusItems, 5, "SUS");
  int sum = 0;
  for (std::size_t i = 0; i < kSusItems; ++i) {
    sum += i % 2 == 0 ? answers[i] - 1 : 5 - answers[i];
  }
  return sum * 2.5;
}

PresenceScore presence_score(std::span<const int> answers) {
  require_answers(answers, kPresenceItems, 7, "presence");
  PresenceScore score;
  for (std::size_t i = 0; i < kPresenceItems; ++i) {
    score.total += i == kReversedPresenceItem ? 8 - answers[i] : answers[i];
  }
  score.percent = static_cast<int>(std::lround(100.0 * score.total / 49.0));
  return score;
}

std::vector<double> item_averages(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) return {};
  std::vector<double> avg(rows.front().size(), 0.0);
  for (const auto& row : rows) {
    if (row.size() != avg.size()) throw Error(ErrorCode::kRangeError, "ragged answer table");
    for (std::size_t i = 0; i < row.size(); ++i) avg[i] += row[i];
  }
  for (auto& a : avg) a = round_to(a / static_cast<double>(rows.size()), 1);
  return avg;
}

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

}  // namespace twinloop::metrics
