#include "twinloop/gateway/script.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "twinloop/bridge/bridge.hpp"
#include "twinloop/common/error.hpp"
#include "twinloop/gateway/gateway.hpp"
#include "twinloop/gateway/scene_file.hpp"
#include "twinloop/runtime/runtime.hpp"

namespace twinloop::gateway {
namespace {

using nlohmann::json;

constexpr double kDefaultAwaitMs = 60'000.0;
constexpr ClientId kScriptClient = 1;

const std::set<std::string, std::less<>> kExpectKeys{
    "last", "mode", "topic", "match", "subtasks", "element_satisfies", "twin_satisfies",
    "plan_length", "notice", "actuations"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kBadArguments, "script line " + std::to_string(line) + ": " + what);
}

double parse_ms(std::size_t line, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v) || v < 0) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    bad_line(line, "expected a duration in ms, got '" + text + "'");
  }
}

json parse_json(std::size_t line, const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) bad_line(line, "invalid JSON: " + text);
  return j;
}

struct Session {
  std::shared_ptr<runtime::SimulatedElement> element;
  std::unique_ptr<runtime::Runtime> rt;
  std::unique_ptr<Gateway> gateway;
  std::vector<std::string> inbox;
  std::map<std::string, json> last_message;
  json last_response;
  ScriptResult* result = nullptr;

  void pump() {
    gateway->on_events(rt->drain_events());
    for (auto& frame : inbox) {
      const WireMessage m = decode(frame);
      if (m.op == Op::kPublish) {
        last_message[m.name] = m.payload;
        ++result->published[m.name];
      } else {
        if (m.op == Op::kServiceResponse)
          last_response = {{"service", m.name}, {"result", m.result}, {"values", m.payload}};
        result->transcript.push_back("< " + frame);
      }
    }
    inbox.clear();
  }
};

std::unique_ptr<Session> open_session(const std::filesystem::path& scene_path, const ScriptOptions& options,
                                      ScriptResult& result) {
  const Scene scene = load_scene(scene_path);
  const world::WorldState truth = make_world(scene);

  auto s = std::make_unique<Session>();
  s->result = &result;
  runtime::ElementOptions element_options = options.element;
  if (element_options.noise_sigma == 0.0) element_options.noise_sigma = scene.config.detector_noise;
  s->element = std::make_shared<runtime::SimulatedElement>(truth, scene.config, element_options);

  runtime::RuntimeConfig config;
  config.scene = scene.config;
  config.participant = options.participant;
  config.search_mode = options.search_mode;
  config.animation_speed = options.animation_speed;
  s->rt = std::make_unique<runtime::Runtime>(config, s->element, truth);

  Session* raw = s.get();
  s->gateway = std::make_unique<Gateway>([raw](ClientId, const std::string& frame) { raw->inbox.push_back(frame); });
  s->gateway->connect(kScriptClient);
  for (auto topic : topics())
    s->gateway->on_frame(kScriptClient, encode(WireMessage{Op::kSubscribe, std::string(topic), {}, {}, {}, true, "info"}),
                         *s->rt);
  s->rt->advance(0.0);
  s->pump();
  return s;
}

std::string atoms_check(const json& wanted, const world::WorldState& world, const world::SceneConfig& config) {
  if (!wanted.is_array()) return "atom list expected";
  const auto atoms = bridge::extract_init(world, config);
  for (const auto& a : wanted) {
    if (!a.is_string()) return "atoms must be strings";
    const auto atom = pddl::parse_atom(a.get<std::string>());
    if (!atoms.contains(atom)) return "missing " + pddl::to_string(atom);
  }
  return {};
}

// Empty string when the predicate holds, else why not.
std::string check(const json& expect, Session& s) {
  auto& rt = *s.rt;
  if (auto it = expect.find("mode"); it != expect.end()) {
    const std::string mode(runtime::to_string(rt.mode()));
    if (*it != mode) return "mode is " + mode + ", expected " + it->dump();
  }
  if (auto it = expect.find("last"); it != expect.end()) {
    if (!json_subset(*it, s.last_response)) return "last response " + s.last_response.dump() + " does not match " + it->dump();
  }
  if (auto it = expect.find("topic"); it != expect.end()) {
    const std::string topic = it->is_string() ? it->get<std::string>() : "";
    auto msg = s.last_message.find(topic);
    if (msg == s.last_message.end()) return "nothing published on " + it->dump();
    const json match = expect.value("match", json::object());
    if (!json_subset(match, msg->second)) return "latest " + topic + " message does not match " + match.dump();
  }
  if (auto it = expect.find("subtasks"); it != expect.end()) {
    const std::string where = it->value("where", "");
    const auto got = metrics::subtasks(rt.log(), where);
    if (!got) return "no subtasks logged for '" + where + "'";
    const json actual{{"where", where}, {"completed", got->completed}, {"total", got->total}};
    if (!json_subset(*it, actual)) return "subtasks " + actual.dump() + " do not match " + it->dump();
  }
  if (auto it = expect.find("element_satisfies"); it != expect.end()) {
    if (auto why = atoms_check(*it, s.element->truth(), rt.config().scene); !why.empty()) return "element: " + why;
  }
  if (auto it = expect.find("twin_satisfies"); it != expect.end()) {
    if (auto why = atoms_check(*it, rt.twin(), rt.config().scene); !why.empty()) return "twin: " + why;
  }
  if (auto it = expect.find("plan_length"); it != expect.end()) {
    if (!rt.plan()) return "no plan";
    if (!it->is_number_unsigned() || it->get<std::size_t>() != rt.plan()->size())
      return "plan length " + std::to_string(rt.plan()->size()) + ", expected " + it->dump();
  }
  if (auto it = expect.find("notice"); it != expect.end()) {
    const std::string notice = rt.status().notice;
    const std::string want = it->is_string() ? it->get<std::string>() : it->dump();
    if (want.empty() ? !notice.empty() : notice.find(want) == std::string::npos)
      return "notice is '" + notice + "', expected '" + want + "'";
  }
  if (auto it = expect.find("actuations"); it != expect.end()) {
    const auto n = s.element->actuation_calls();
    if (!it->is_number_unsigned() || it->get<std::size_t>() != n)
      return "element saw " + std::to_string(n) + " actuations, expected " + it->dump();
  }
  return {};
}

}  // namespace

bool json_subset(const json& expected, const json& actual) {
  if (expected.is_object()) {
    if (!actual.is_object()) return false;
    for (const auto& [key, value] : expected.items()) {
      auto it = actual.find(key);
      if (it == actual.end() || !json_subset(value, *it)) return false;
    }
    return true;
  }
  if (expected.is_array()) {
    if (!actual.is_array() || actual.size() != expected.size()) return false;
    for (std::size_t i = 0; i < expected.size(); ++i)
      if (!json_subset(expected[i], actual[i])) return false;
    return true;
  }
  if (expected.is_number() && actual.is_number())
    return std::abs(expected.get<double>() - actual.get<double>()) <= 1e-6;
  return expected == actual;
}

std::vector<ScriptLine> parse_script(std::string_view text) {
  std::vector<ScriptLine> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto space = line.find_first_of(" \t");
    const std::string head = line.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : trim(line.substr(space));
    ScriptLine s;
    s.line = n;
    if (head.front() == '/') {
      s.kind = ScriptLine::Kind::kCall;
      s.name = head;
      if (!rest.empty()) s.args = parse_json(n, rest);
      if (!s.args.is_object()) bad_line(n, "service arguments must be a JSON object");
    } else if (head == "scene") {
      if (rest.empty()) bad_line(n, "scene needs a path");
      s.kind = ScriptLine::Kind::kScene;
      s.name = rest;
    } else if (head == "wait") {
      s.kind = ScriptLine::Kind::kWait;
      s.ms = parse_ms(n, rest);
    } else if (head == "await") {
      s.kind = ScriptLine::Kind::kAwait;
      std::istringstream words(rest);
      std::string mode, timeout;
      words >> mode >> timeout;
      if (!runtime::mode_from_string(mode)) bad_line(n, "unknown mode '" + mode + "'");
      s.name = mode;
      s.ms = timeout.empty() ? kDefaultAwaitMs : parse_ms(n, timeout);
    } else if (head == "expect") {
      s.kind = ScriptLine::Kind::kExpect;
      s.args = parse_json(n, rest);
      if (!s.args.is_object() || s.args.empty()) bad_line(n, "expect needs a non-empty JSON object");
      for (const auto& [key, value] : s.args.items()) {
        (void)value;
        if (!kExpectKeys.contains(key)) bad_line(n, "unknown expectation '" + key + "'");
      }
    } else {
      bad_line(n, "unknown directive '" + head + "'");
    }
    out.push_back(std::move(s));
  }
  return out;
}

ScriptResult run_script(std::string_view text, const ScriptOptions& options) {
  ScriptResult result;
  const auto lines = parse_script(text);
  std::unique_ptr<Session> session;
  if (options.scene) session = open_session(*options.scene, options, result);

  auto fail = [&](std::size_t line, const std::string& why) {
    result.ok = false;
    result.failure = "line " + std::to_string(line) + ": " + why;
  };

  for (const auto& l : lines) {
    if (l.kind == ScriptLine::Kind::kScene) {
      if (options.scene) continue;
      if (session) bad_line(l.line, "scene given twice");
      session = open_session(options.base_dir / l.name, options, result);
      continue;
    }
    if (!session) bad_line(l.line, "no scene loaded yet");
    auto& rt = *session->rt;
    switch (l.kind) {
      case ScriptLine::Kind::kCall: {
        const std::string frame = encode(call_service(l.name, l.args, "line" + std::to_string(l.line)));
        result.transcript.push_back("> " + frame);
        session->gateway->on_frame(kScriptClient, frame, rt);
        session->pump();
        break;
      }
      case ScriptLine::Kind::kWait:
        rt.advance(l.ms);
        session->pump();
        break;
      case ScriptLine::Kind::kAwait: {
        const auto target = *runtime::mode_from_string(l.name);
        const double deadline = rt.now_ms() + l.ms;
        while (rt.mode() != target && rt.now_ms() < deadline) {
          rt.advance(rt.config().tick_ms);
          session->pump();
        }
        if (rt.mode() != target)
          fail(l.line, "timed out waiting for " + l.name + " (mode " + std::string(runtime::to_string(rt.mode())) +
                           ", notice '" + rt.status().notice + "')");
        break;
      }
      case ScriptLine::Kind::kExpect:
        try {
          if (auto why = check(l.args, *session); !why.empty()) fail(l.line, why);
        } catch (const Error& e) {
          fail(l.line, std::string(to_string(e.code())) + ": " + e.what());
        }
        break;
      case ScriptLine::Kind::kScene:
        break;
    }
    if (!result.ok) break;
  }

  if (session) {
    result.log = session->rt->log();
    result.twin = session->rt->twin();
    result.element_truth = session->element->truth();
    result.element_actuations = session->element->actuation_calls();
  }
  return result;
}

ScriptResult run_script_file(const std::filesystem::path& path, ScriptOptions options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read script " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  if (options.base_dir == ".") options.base_dir = path.parent_path().empty() ? "." : path.parent_path();
  return run_script(ss.str(), options);
}

}  // namespace twinloop::gateway
