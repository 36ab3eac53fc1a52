#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

// Line-delimited JSON session logs. The first line is a header
//   {"participant":"p01","strategy":"procedural"}
// and every following line is one event
//   {"t":12.250,"kind":"record-click", ...kind specific fields}
// with t in seconds since session start.
namespace twinloop::metrics {

enum class Strategy { kProcedural, kDeclarative };

std::string_view to_string(Strategy strategy);
/// Throws Error(kBadArguments) for anything but "procedural"/"declarative".
Strategy strategy_from_string(std::string_view name);

namespace event {
inline constexpr std::string_view kModeSwitch = "mode-switch";  // {"to": strategy}
inline constexpr std::string_view kRecordClick = "record-click";
inline constexpr std::string_view kExecuteClick = "execute-click";
inline constexpr std::string_view kSubtasks = "subtasks";  // {"where","completed","total"}
}  // namespace event

struct SessionEvent {
  double t = 0.0;
  std::string kind;
  nlohmann::json data = nlohmann::json::object();
};

struct SessionLog {
  std::string participant;
  Strategy strategy = Strategy::kProcedural;
  std::vector<SessionEvent> events;

  void add(double t, std::string_view kind, nlohmann::json data = nlohmann::json::object());
};

std::string write_session_log(const SessionLog& log);

/// Throws Error(kMalformedLog) on bad JSON, a missing header, events without
/// t/kind, or timestamps that go backwards.
SessionLog read_session_log(std::string_view text);

SessionLog load_session_log(const std::string& path);
void save_session_log(const SessionLog& log, const std::string& path);

/// Completed/total of the last "subtasks" event for `where` ("vr" or
/// "element"), nullopt when the log has none.
struct SubtaskCount {
  int completed = 0;
  int total = 0;
};
std::optional<SubtaskCount> subtasks(const SessionLog& log, std::string_view where);

}  // namespace twinloop::metrics
