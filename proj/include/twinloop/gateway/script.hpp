#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twinloop/metrics/session_log.hpp"
#include "twinloop/planner/planner.hpp"
#include "twinloop/runtime/element.hpp"

// Headless sessions. A script is a line-oriented list of gateway commands
// run against an in-process runtime and simulated element:
//
//   # comment
//   scene scenes/colorsort.yaml        relative to the script file
//   /control/mode {"strategy":"declarative"}
//   wait 500                           advance simulated time (ms)
//   await Done 60000                   advance until the mode is reached
//   expect {"mode":"Done","plan_length":6}
//
// Service calls travel through the gateway as encoded frames.
namespace twinloop::gateway {

struct ScriptLine {
  enum class Kind { kScene, kCall, kWait, kAwait, kExpect };

  std::size_t line = 0;
  Kind kind = Kind::kCall;
  std::string name;  // service, scene path or awaited mode
  nlohmann::json args = nlohmann::json::object();
  double ms = 0.0;
};

/// Throws Error(kBadArguments) naming the line.
std::vector<ScriptLine> parse_script(std::string_view text);

struct ScriptOptions {
  std::filesystem::path base_dir = ".";
  std::optional<std::filesystem::path> scene;  // overrides the script's scene line
  runtime::ElementOptions element;
  std::string participant = "p00";
  std::optional<planner::SearchMode> search_mode;
  double animation_speed = 100.0;
};

struct ScriptResult {
  bool ok = true;
  std::string failure;              // "line N: ..." of the first failed step
  std::vector<std::string> transcript;  // request and response frames
  std::map<std::string, std::size_t> published;  // topic -> message count
  metrics::SessionLog log;
  std::optional<world::WorldState> element_truth;
  std::optional<world::WorldState> twin;
  std::size_t element_actuations = 0;
};

/// Runs until the first failing expectation or call error. Calls that fail
/// are not fatal by themselves; check them with expect {"last":...}.
ScriptResult run_script(std::string_view text, const ScriptOptions& options);

/// base_dir defaults to the script's directory.
ScriptResult run_script_file(const std::filesystem::path& path, ScriptOptions options);

/// True when `expected` is contained in `actual`: objects by key subset,
/// arrays element-wise with equal length, numbers within 1e-6.
bool json_subset(const nlohmann::json& expected, const nlohmann::json& actual);

}  // namespace twinloop::gateway
