#include "twinloop/gateway/gateway.hpp"

#include <algorithm>

#include "twinloop/common/error.hpp"
#include "twinloop/gateway/codec.hpp"
#include "twinloop/metrics/session_log.hpp"

namespace twinloop::gateway {
namespace {

using runtime::Runtime;

json error_values(ErrorCode code, std::string_view message) {
  return {{"error", to_string(code)}, {"message", message}};
}

json mode_values(const Runtime& rt) { return {{"mode", runtime::to_string(rt.mode())}}; }

bool bool_arg(const json& args, const char* key) {
  auto it = args.find(key);
  if (it == args.end() || !it->is_boolean())
    throw Error(ErrorCode::kBadArguments, std::string("'") + key + "' must be a boolean");
  return it->get<bool>();
}

std::vector<runtime::CubeEdit> cube_edits(const json& args) {
  auto it = args.find("cubes");
  if (it == args.end() || !it->is_array())
    throw Error(ErrorCode::kBadArguments, "'cubes' must be a list of {tag, center}");
  std::vector<runtime::CubeEdit> edits;
  for (const auto& c : *it) {
    if (!c.is_object() || !c.contains("tag") || !c["tag"].is_string() || !c.contains("center"))
      throw Error(ErrorCode::kBadArguments, "each cube needs a string 'tag' and a 'center'");
    auto [center, has_z] = vec3_from_json_optional_z(c["center"]);
    runtime::CubeEdit e{c["tag"].get<std::string>(), center.x, center.y, std::nullopt};
    if (has_z) e.z = center.z;
    edits.push_back(std::move(e));
  }
  return edits;
}

using Handler = json (*)(const json& args, Runtime& rt);

json robot_state(const json&, Runtime& rt) {
  return to_json(rt.element_state() ? *rt.element_state() : rt.twin().robot);
}

json move_to(const json& args, Runtime& rt) { return to_json(rt.move_effector(vec3_from_json(args))); }
json suction(const json& args, Runtime& rt) { return to_json(rt.set_suction(bool_arg(args, "on"))); }

json record(const json&, Runtime& rt) { rt.record(); return mode_values(rt); }
json stop(const json&, Runtime& rt) { rt.stop(); return mode_values(rt); }
json replay(const json&, Runtime& rt) { rt.replay(); return mode_values(rt); }
json restart(const json&, Runtime& rt) { rt.restart(); return mode_values(rt); }

json execute(const json&, Runtime& rt) {
  rt.execute();
  json v = mode_values(rt);
  if (rt.last_execution() && !rt.busy()) v["report"] = to_json(*rt.last_execution());
  return v;
}

json register_goal(const json& args, Runtime& rt) {
  rt.register_goal(cube_edits(args));
  json v = mode_values(rt);
  v["goal"] = to_json(*rt.goal());
  return v;
}

json solve(const json&, Runtime& rt) {
  rt.solve();
  json v = mode_values(rt);
  if (rt.plan()) {
    v["plan"] = to_json(*rt.plan());
    v["length"] = rt.plan()->size();
  }
  const auto notice = rt.status().notice;
  if (!notice.empty()) v["notice"] = notice;
  return v;
}

json mode(const json& args, Runtime& rt) {
  auto it = args.find("strategy");
  if (it == args.end() || !it->is_string())
    throw Error(ErrorCode::kBadArguments, "'strategy' must be \"procedural\" or \"declarative\"");
  const auto strategy = metrics::strategy_from_string(it->get<std::string>());
  if (strategy == metrics::Strategy::kDeclarative) rt.select_declarative();
  else rt.select_procedural();
  return mode_values(rt);
}

const std::map<std::string, Handler, std::less<>>& handlers() {
  static const std::map<std::string, Handler, std::less<>> table{
      {"/robot/state", robot_state},       {"/robot/move_to", move_to},
      {"/robot/suction", suction},         {"/control/record", record},
      {"/control/stop", stop},             {"/control/replay", replay},
      {"/control/restart", restart},       {"/control/execute", execute},
      {"/control/register_goal", register_goal}, {"/control/solve", solve},
      {"/control/mode", mode},
  };
  return table;
}

// Best effort recovery of the correlation data of a frame that failed to decode.
std::optional<WireMessage> error_reply_for(std::string_view frame, const Error& error) {
  auto parsed = parse_bounded(frame);
  if (!parsed || !parsed->is_object()) return std::nullopt;
  const json& j = *parsed;
  auto op = j.find("op");
  auto id = j.find("id");
  if (op == j.end() || *op != "call_service" || id == j.end() || !id->is_string()) return std::nullopt;
  std::string service = "/";
  auto s = j.find("service");
  if (s != j.end() && s->is_string() && !s->get<std::string>().empty() && s->get<std::string>().front() == '/')
    service = s->get<std::string>();
  return service_response(service, error_values(error.code(), error.what()), false, id->get<std::string>());
}

}  // namespace

const std::vector<std::string_view>& topics() {
  static const std::vector<std::string_view> list{kTopicObjects, kTopicTwin, kTopicMode, kTopicCamera};
  return list;
}

const std::vector<std::string_view>& services() {
  static const std::vector<std::string_view> list = [] {
    std::vector<std::string_view> out;
    for (const auto& [name, handler] : handlers()) out.push_back(name);
    return out;
  }();
  return list;
}

WireMessage to_message(const runtime::RuntimeEvent& event) {
  return std::visit(
      [](const auto& e) -> WireMessage {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, runtime::DetectionMessage>) {
          return publish(std::string(kTopicObjects), to_json(e));
        } else if constexpr (std::is_same_v<T, runtime::TwinUpdate>) {
          return publish(std::string(kTopicTwin), {{"stamp_ms", e.stamp_ms}, {"world", to_json(e.world)}});
        } else if constexpr (std::is_same_v<T, runtime::ModeStatus>) {
          return publish(std::string(kTopicMode), to_json(e));
        } else {
          return publish(std::string(kTopicCamera), to_json(e));
        }
      },
      event);
}

std::optional<WireMessage> latched(std::string_view topic, const Runtime& rt) {
  if (topic == kTopicMode) return to_message(rt.status());
  if (topic == kTopicTwin) return to_message(runtime::TwinUpdate{rt.now_ms(), rt.twin()});
  if (topic == kTopicObjects && rt.latest_detection()) return to_message(*rt.latest_detection());
  return std::nullopt;
}

Gateway::Gateway(Send send) : send_(std::move(send)) {}

void Gateway::connect(ClientId client) {
  std::lock_guard lock(mutex_);
  clients_.insert(client);
}

void Gateway::disconnect(ClientId client) {
  std::lock_guard lock(mutex_);
  clients_.erase(client);
  for (auto& [topic, subs] : subscribers_) subs.erase(client);
}

std::set<std::string> Gateway::subscriptions(ClientId client) const {
  std::lock_guard lock(mutex_);
  std::set<std::string> out;
  for (const auto& [topic, subs] : subscribers_)
    if (subs.contains(client)) out.insert(topic);
  return out;
}

void Gateway::send(ClientId client, const WireMessage& message) {
  if (send_) send_(client, encode(message));
}

void Gateway::on_frame(ClientId client, std::string_view frame, Runtime& rt) {
  WireMessage message;
  try {
    message = decode(frame);
  } catch (const Error& e) {
    if (auto reply = error_reply_for(frame, e)) send(client, *reply);
    else send(client, status("error", std::string(to_string(e.code())) + ": " + e.what()));
    return;
  }
  handle(client, message, rt);
}

void Gateway::handle(ClientId client, const WireMessage& m, Runtime& rt) {
  switch (m.op) {
    case Op::kSubscribe: {
      const bool known = std::find(topics().begin(), topics().end(), m.name) != topics().end();
      if (!known) {
        send(client, status("error", "BadArguments: unknown topic " + m.name, m.id));
        return;
      }
      bool added = false;
      {
        std::lock_guard lock(mutex_);
        added = subscribers_[m.name].insert(client).second;
      }
      if (added)
        if (auto snapshot = latched(m.name, rt)) send(client, *snapshot);
      return;
    }
    case Op::kUnsubscribe: {
      std::lock_guard lock(mutex_);
      if (auto it = subscribers_.find(m.name); it != subscribers_.end()) it->second.erase(client);
      return;
    }
    case Op::kCallService:
      send(client, call(m, rt));
      return;
    case Op::kPublish:
      send(client, status("error", "BadArguments: clients may not publish to " + m.name, m.id));
      return;
    case Op::kServiceResponse:
    case Op::kStatus:
      send(client, status("error", std::string("BadArguments: unexpected ") + std::string(to_string(m.op)), m.id));
      return;
  }
}

WireMessage Gateway::call(const WireMessage& request, Runtime& rt) {
  auto it = handlers().find(request.name);
  if (it == handlers().end())
    return service_response(request.name,
                            error_values(ErrorCode::kUnknownService, "no service " + request.name), false,
                            request.id);
  const json args = request.payload.is_null() ? json::object() : request.payload;
  try {
    return service_response(request.name, it->second(args, rt), true, request.id);
  } catch (const Error& e) {
    json values = error_values(e.code(), e.what());
    values["mode"] = runtime::to_string(rt.mode());
    if (e.code() == ErrorCode::kOutOfWorkspace) values["effector"] = to_json(rt.twin().robot.effector);
    return service_response(request.name, values, false, request.id);
  } catch (const std::exception& e) {
    return service_response(request.name, {{"error", "Internal"}, {"message", e.what()}}, false, request.id);
  }
}

void Gateway::on_events(const std::vector<runtime::RuntimeEvent>& events) {
  for (const auto& event : events) {
    const WireMessage message = to_message(event);
    std::vector<ClientId> targets;
    {
      std::lock_guard lock(mutex_);
      auto it = subscribers_.find(message.name);
      if (it == subscribers_.end() || it->second.empty()) continue;
      targets.assign(it->second.begin(), it->second.end());
    }
    const std::string frame = encode(message);
    for (auto client : targets)
      if (send_) send_(client, frame);
  }
}

}  // namespace twinloop::gateway
