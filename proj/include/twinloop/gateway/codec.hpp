#pragma once

#include <json.hpp>

#include "twinloop/pddl/ast.hpp"
#include "twinloop/runtime/runtime.hpp"

// JSON shapes of the domain types carried in topic messages and service
// values. docs/protocol.md lists every field.
namespace twinloop::gateway {

using nlohmann::json;

json to_json(world::Vec3 v);
/// {"x","y","z"} with finite numbers; throws Error(kBadArguments).
world::Vec3 vec3_from_json(const json& j);
/// Like vec3_from_json but z may be omitted.
std::pair<world::Vec3, bool> vec3_from_json_optional_z(const json& j);

json to_json(const world::CubeObject& cube);
json to_json(const world::NamedPosition& position);
/// Service shape: {"effector":{...},"suction":bool}.
json to_json(const world::RobotState& robot);
json to_json(const world::WorldState& world);
json to_json(const runtime::DetectionMessage& message);
json to_json(const runtime::ModeStatus& status);
json to_json(const runtime::CameraMeta& meta);
json to_json(const runtime::ExecutionReport& report);
json to_json(const pddl::Plan& plan);
json to_json(const pddl::AtomSet& atoms);

}  // namespace twinloop::gateway
