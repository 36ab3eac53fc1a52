#include "twinloop/metrics/session_log.hpp"

#include <fstream>
#include <sstream>

#include "twinloop/common/error.hpp"

namespace twinloop::metrics {

using nlohmann::json;

std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::kProcedural ? "procedural" : "declarative";
}

Strategy strategy_from_string(std::string_view name) {
  if (name == "procedural") return Strategy::kProcedural;
  if (name == "declarative") return Strategy::kDeclarative;
  throw Error(ErrorCode::kBadArguments, "unknown control strategy '" + std::string(name) + "'");
}

void SessionLog::add(double t, std::string_view kind, json data) {
  events.push_back({t, std::string(kind), std::move(data)});
}

std::string write_session_log(const SessionLog& log) {
  std::string out =
      json{{"participant", log.participant}, {"strategy", to_string(log.strategy)}}.dump() + "\n";
  for (const auto& e : log.events) {
    json line = {{"t", e.t}, {"kind", e.kind}};
    for (const auto& [key, value] : e.data.items()) line[key] = value;
    out += line.dump() + "\n";
  }
  return out;
}

SessionLog read_session_log(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  SessionLog log;
  bool have_header = false;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kMalformedLog, "line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(e.what());
    }
    if (!j.is_object()) fail("expected a JSON object");
    if (!have_header) {
      if (!j.contains("strategy") || !j["strategy"].is_string()) fail("header lacks strategy");
      try {
        log.strategy = strategy_from_string(j["strategy"].get<std::string>());
      } catch (const Error& e) {
        fail(e.what());
      }
      log.participant = j.value("participant", "");
      have_header = true;
      continue;
    }
    if (!j.contains("t") || !j["t"].is_number()) fail("event lacks numeric t");
    if (!j.contains("kind") || !j["kind"].is_string()) fail("event lacks kind");
    SessionEvent e;
    e.t = j["t"].get<double>();
    e.kind = j["kind"].get<std::string>();
    j.erase("t");
    j.erase("kind");
    e.data = std::move(j);
    if (!log.events.empty() && e.t < log.events.back().t) fail("timestamp goes backwards");
    log.events.push_back(std::move(e));
  }
  if (!have_header) throw Error(ErrorCode::kMalformedLog, "empty session log");
  return log;
}

SessionLog load_session_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return read_session_log(buf.str());
}

void save_session_log(const SessionLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << write_session_log(log);
}

std::optional<SubtaskCount> subtasks(const SessionLog& log, std::string_view where) {
  std::optional<SubtaskCount> found;
  for (const auto& e : log.events) {
    if (e.kind != event::kSubtasks || e.data.value("where", "") != where) continue;
    found = SubtaskCount{e.data.value("completed", 0), e.data.value("total", 0)};
  }
  return found;
}

}  // namespace twinloop::metrics
