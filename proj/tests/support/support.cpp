#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace support {

std::filesystem::path data_path(const std::string& relative) { return std::filesystem::path(TWINLOOP_DATA_DIR) / relative; }

std::filesystem::path tables_path(const std::string& relative) {
  return std::filesystem::path(TWINLOOP_TABLES_DIR) / relative;
}

std::filesystem::path golden_path(const std::string& relative) {
  return std::filesystem::path(TWINLOOP_GOLDEN_DIR) / relative;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Rig make_rig(const std::string& scene_file, twinloop::runtime::RuntimeConfig config,
             twinloop::runtime::ElementOptions options) {
  Rig rig;
  rig.scene = twinloop::gateway::load_scene(data_path("scenes/" + scene_file));
  const auto world = twinloop::gateway::make_world(rig.scene);
  rig.element = std::make_shared<twinloop::runtime::SimulatedElement>(world, rig.scene.config, options);
  config.scene = rig.scene.config;
  rig.runtime = std::make_unique<twinloop::runtime::Runtime>(config, rig.element, world);
  return rig;
}

}  // namespace support
