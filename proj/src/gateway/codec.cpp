#include "twinloop/gateway/codec.hpp"

#include <cmath>

#include "twinloop/bridge/bridge.hpp"
#include "twinloop/common/error.hpp"

namespace twinloop::gateway {
namespace {

double number(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::kBadArguments, std::string("missing '") + key + "'");
  if (!it->is_number()) throw Error(ErrorCode::kBadArguments, std::string("'") + key + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::kBadArguments, std::string("'") + key + "' must be finite");
  return v;
}

}  // namespace

json to_json(world::Vec3 v) { return {{"x", v.x}, {"y", v.y}, {"z", v.z}}; }

world::Vec3 vec3_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kBadArguments, "point must be an object {x,y,z}");
  return {number(j, "x"), number(j, "y"), number(j, "z")};
}

std::pair<world::Vec3, bool> vec3_from_json_optional_z(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kBadArguments, "point must be an object {x,y[,z]}");
  const bool has_z = j.contains("z");
  return {{number(j, "x"), number(j, "y"), has_z ? number(j, "z") : 0.0}, has_z};
}

json to_json(const world::CubeObject& cube) {
  return {{"tag", cube.tag},
          {"color", world::to_string(cube.color)},
          {"center", to_json(cube.center)},
          {"edge", cube.edge}};
}

json to_json(const world::NamedPosition& position) {
  return {{"tag", position.tag},
          {"color", world::to_string(position.color)},
          {"center", to_json(position.center)},
          {"radius", position.radius}};
}

json to_json(const world::RobotState& robot) {
  return {{"effector", to_json(robot.effector)}, {"suction", robot.suction}};
}

json to_json(const world::WorldState& w) {
  json cubes = json::array();
  for (const auto& c : w.cubes) cubes.push_back(to_json(c));
  json positions = json::array();
  for (const auto& p : w.positions) positions.push_back(to_json(p));
  json robot = to_json(w.robot);
  robot["joints"] = {{"base_yaw", w.robot.joints.base_yaw},
                     {"rear_elevation", w.robot.joints.rear_elevation},
                     {"fore_elevation", w.robot.joints.fore_elevation}};
  return {{"cubes", cubes},
          {"positions", positions},
          {"robot", robot},
          {"held", w.held ? json(*w.held) : json(nullptr)}};
}

json to_json(const runtime::DetectionMessage& m) {
  json objects = json::array();
  for (const auto& o : m.objects)
    objects.push_back({{"tag", o.tag}, {"color", world::to_string(o.color)}, {"center", to_json(o.center)}});
  return {{"seq", m.seq}, {"stamp_ms", m.stamp_ms}, {"objects", objects}};
}

json to_json(const runtime::ModeStatus& s) {
  json buttons = json::array();
  for (auto t : runtime::user_triggers(s.mode)) buttons.push_back(runtime::to_string(t));
  return {{"mode", runtime::to_string(s.mode)}, {"hint", s.hint}, {"notice", s.notice}, {"buttons", buttons}};
}

json to_json(const runtime::CameraMeta& m) {
  return {{"timestamp", m.stamp_ms}, {"width", m.width}, {"height", m.height}, {"frame_id", m.frame_id}};
}

json to_json(const runtime::ExecutionReport& r) {
  json results = json::array();
  for (const auto& p : r.results)
    results.push_back({{"primitive", bridge::to_string(p.primitive)}, {"ok", p.ok}});
  return {{"ok", r.ok()},
          {"results", results},
          {"aborted_at", r.aborted_at ? json(*r.aborted_at) : json(nullptr)},
          {"error", r.error}};
}

json to_json(const pddl::Plan& plan) {
  json steps = json::array();
  for (const auto& s : plan.steps) steps.push_back(pddl::to_string(s));
  return steps;
}

json to_json(const pddl::AtomSet& atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back(pddl::to_string(a));
  return out;
}

}  // namespace twinloop::gateway
