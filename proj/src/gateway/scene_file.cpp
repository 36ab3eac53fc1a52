#include "twinloop/gateway/scene_file.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "twinloop/common/error.hpp"
#include "twinloop/world/world.hpp"

namespace twinloop::gateway {
namespace {

using world::Vec3;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kBadArguments, "scene: " + what); }

double to_double(const YAML::Node& n, const std::string& where) {
  if (!n.IsScalar()) bad(where + " must be a number");
  double v = 0.0;
  if (!YAML::convert<double>::decode(n, v) || !std::isfinite(v)) bad(where + " must be a finite number");
  return v;
}

std::string to_str(const YAML::Node& n, const std::string& where) {
  if (!n.IsScalar()) bad(where + " must be a string");
  return n.as<std::string>();
}

std::vector<double> numbers(const YAML::Node& n, const std::string& where, std::size_t min, std::size_t max) {
  if (!n.IsSequence() || n.size() < min || n.size() > max)
    bad(where + " must be a list of " + std::to_string(min) + ".." + std::to_string(max) + " numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(to_double(n[i], where));
  return out;
}

void only_keys(const YAML::Node& n, const std::set<std::string>& keys, const std::string& where) {
  if (!n.IsMap()) bad(where + " must be a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!keys.contains(key)) bad("unknown key '" + key + "' in " + where);
  }
}

world::AngleRange degrees(const YAML::Node& n, const std::string& where) {
  auto v = numbers(n, where, 2, 2);
  return {world::deg_to_rad(v[0]), world::deg_to_rad(v[1])};
}

Vec3 point3(const YAML::Node& n, const std::string& where) {
  auto v = numbers(n, where, 3, 3);
  return {v[0], v[1], v[2]};
}

void read_config(const YAML::Node& n, world::SceneConfig& c) {
  using Setter = std::function<void(const YAML::Node&, const std::string&)>;
  auto scalar = [](double& field) -> Setter {
    return [&field](const YAML::Node& v, const std::string& k) { field = to_double(v, k); };
  };
  const std::map<std::string, Setter> fields{
      {"rear_arm_length", scalar(c.rear_arm_length)},
      {"forearm_length", scalar(c.forearm_length)},
      {"base_height", scalar(c.base_height)},
      {"cube_edge", scalar(c.cube_edge)},
      {"position_radius", scalar(c.position_radius)},
      {"tol_at", scalar(c.tol_at)},
      {"tol_on", scalar(c.tol_on)},
      {"tol_overlap", scalar(c.tol_overlap)},
      {"detector_noise", scalar(c.detector_noise)},
      {"approach_height", scalar(c.approach_height)},
      {"grip_radius", scalar(c.grip_radius)},
      {"base_position", [&c](const YAML::Node& v, const std::string& k) { c.base_position = point3(v, k); }},
      {"home", [&c](const YAML::Node& v, const std::string& k) { c.home = point3(v, k); }},
      {"base_yaw_limits_deg", [&c](const YAML::Node& v, const std::string& k) { c.base_yaw_limits = degrees(v, k); }},
      {"rear_elevation_limits_deg",
       [&c](const YAML::Node& v, const std::string& k) { c.rear_elevation_limits = degrees(v, k); }},
      {"fore_elevation_limits_deg",
       [&c](const YAML::Node& v, const std::string& k) { c.fore_elevation_limits = degrees(v, k); }},
  };
  if (!n.IsMap()) bad("config must be a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    auto it = fields.find(key);
    if (it == fields.end()) bad("unknown key '" + key + "' in config");
    it->second(kv.second, "config." + key);
  }
  if (c.rear_arm_length <= 0 || c.forearm_length <= 0) bad("link lengths must be positive");
  for (double t : {c.tol_at, c.tol_on, c.tol_overlap, c.detector_noise, c.grip_radius})
    if (t < 0) bad("tolerances must be non-negative");
  if (c.cube_edge <= 0 || c.position_radius <= 0) bad("cube_edge and position_radius must be positive");
}

}  // namespace

Scene parse_scene(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    bad(e.what());
  }
  Scene scene;
  if (root.IsNull()) return scene;
  only_keys(root, {"config", "cubes", "positions"}, "scene");
  if (root["config"]) read_config(root["config"], scene.config);

  if (auto cubes = root["cubes"]) {
    if (!cubes.IsSequence()) bad("cubes must be a list");
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      const auto& n = cubes[i];
      const std::string where = "cubes[" + std::to_string(i) + "]";
      only_keys(n, {"tag", "color", "center", "edge"}, where);
      if (!n["tag"] || !n["center"]) bad(where + " needs tag and center");
      world::CubeObject cube;
      cube.tag = to_str(n["tag"], where + ".tag");
      cube.color = n["color"] ? world::color_from_string(to_str(n["color"], where + ".color")) : world::Color::kOther;
      cube.edge = n["edge"] ? to_double(n["edge"], where + ".edge") : scene.config.cube_edge;
      if (cube.edge <= 0) bad(where + ".edge must be positive");
      auto c = numbers(n["center"], where + ".center", 2, 3);
      cube.center = {c[0], c[1], c.size() == 3 ? c[2] : cube.edge / 2.0};
      scene.cubes.push_back(std::move(cube));
    }
  }
  if (auto positions = root["positions"]) {
    if (!positions.IsSequence()) bad("positions must be a list");
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const auto& n = positions[i];
      const std::string where = "positions[" + std::to_string(i) + "]";
      only_keys(n, {"tag", "color", "center", "radius"}, where);
      if (!n["tag"] || !n["center"]) bad(where + " needs tag and center");
      world::NamedPosition p;
      p.tag = to_str(n["tag"], where + ".tag");
      p.color = n["color"] ? world::color_from_string(to_str(n["color"], where + ".color")) : world::Color::kOther;
      p.radius = n["radius"] ? to_double(n["radius"], where + ".radius") : scene.config.position_radius;
      if (p.radius <= 0) bad(where + ".radius must be positive");
      auto c = numbers(n["center"], where + ".center", 2, 2);
      p.center = {c[0], c[1], 0.0};
      scene.positions.push_back(std::move(p));
    }
  }
  return scene;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read scene file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

world::WorldState make_world(const Scene& scene) {
  return world::new_world(scene.config, scene.cubes, scene.positions);
}

}  // namespace twinloop::gateway
