#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "twinloop/gateway/scene_file.hpp"
#include "twinloop/runtime/runtime.hpp"

namespace support {

std::filesystem::path data_path(const std::string& relative);
std::filesystem::path tables_path(const std::string& relative = "");
std::filesystem::path golden_path(const std::string& relative);
std::string read_text(const std::filesystem::path& path);

/// Runtime wired to a simulated element over the same scene; the twin starts
/// equal to the ground truth.
struct Rig {
  twinloop::gateway::Scene scene;
  std::shared_ptr<twinloop::runtime::SimulatedElement> element;
  std::unique_ptr<twinloop::runtime::Runtime> runtime;
};

Rig make_rig(const std::string& scene_file, twinloop::runtime::RuntimeConfig config = {},
             twinloop::runtime::ElementOptions options = {});

}  // namespace support
