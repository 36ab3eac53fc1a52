#pragma once

#include <cstddef>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twinloop/bridge/bridge.hpp"
#include "twinloop/common/error.hpp"
#include "twinloop/metrics/session_log.hpp"
#include "twinloop/planner/planner.hpp"
#include "twinloop/runtime/element.hpp"
#include "twinloop/runtime/recording.hpp"
#include "twinloop/runtime/session_mode.hpp"
#include "twinloop/runtime/task.hpp"

namespace twinloop::runtime {

struct RuntimeConfig {
  SceneConfig scene;
  double sample_distance_mm = 5.0;
  double stale_after_ms = 2000.0;
  double state_poll_period_ms = 200.0;
  double camera_period_ms = 1000.0;
  double twin_publish_period_ms = 100.0;
  double animation_speed = 100.0;  // mm/s; <= 0 finishes animations at once
  double tick_ms = 10.0;
  bool async_jobs = false;  // plan and execute on worker threads
  std::optional<planner::SearchMode> search_mode;  // default: by cube count
  std::size_t node_budget = 1'000'000;
  std::string participant = "p00";
};

struct ModeStatus {
  Mode mode = Mode::kIdle;
  std::string hint;
  std::string notice;  // latest advisory or error, empty when none

  friend bool operator==(const ModeStatus&, const ModeStatus&) = default;
};

struct CameraMeta {
  double stamp_ms = 0.0;
  int width = 640;
  int height = 480;
  std::string frame_id = "workspace_camera";

  friend bool operator==(const CameraMeta&, const CameraMeta&) = default;
};

struct TwinUpdate {
  double stamp_ms = 0.0;
  WorldState world;
};

using RuntimeEvent = std::variant<DetectionMessage, TwinUpdate, ModeStatus, CameraMeta>;

/// Goal-state edit: move a cube. Without z the cube settles on whatever lies
/// below its new footprint.
struct CubeEdit {
  std::string tag;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> z;
};

/// Single-writer owner of the twin and the session. Every method must be
/// called from one thread at a time (Host serializes serve-mode access).
/// Time only moves through advance(); with async_jobs off, planning and
/// execution complete inside the call that starts them.
class Runtime {
 public:
  Runtime(RuntimeConfig config, std::shared_ptr<ElementLink> element, WorldState initial_twin);
  ~Runtime();

  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  // Monitoring and time.
  void advance(double ms);
  /// Pulls robot state and any due detection now. Throws
  /// Error(kServiceUnavailable) or Error(kStaleData); the twin is left
  /// unchanged in both cases.
  const WorldState& monitor_tick();

  // Procedural control.
  /// Moves the twin arm. Unreachable targets are clamped to the nearest
  /// reachable point and reported with Error(kOutOfWorkspace) after moving.
  RobotState move_effector(Vec3 target);
  /// Twin suction, only while recording.
  RobotState set_suction(bool on);
  void record();
  void stop();
  void replay();
  void restart();
  void execute();

  // Declarative control.
  void select_procedural();
  void select_declarative();
  void register_goal(const std::vector<CubeEdit>& edits);
  void solve();

  // Views.
  Mode mode() const { return machine_.mode(); }
  ModeStatus status() const;
  const WorldState& twin() const { return twin_; }
  const Recording& recording() const { return recording_; }
  const std::optional<pddl::AtomSet>& goal() const { return goal_; }
  const std::optional<pddl::Plan>& plan() const { return plan_; }
  const bridge::MotionQueue& motions() const { return motions_; }
  const std::optional<ExecutionReport>& last_execution() const { return last_report_; }
  const std::optional<DetectionMessage>& latest_detection() const { return latest_detection_; }
  const std::optional<RobotState>& element_state() const { return element_state_; }
  const std::vector<Transition>& transitions() const { return machine_.history(); }
  const metrics::SessionLog& log() const { return log_; }
  const RuntimeConfig& config() const { return config_; }
  double now_ms() const { return now_ms_; }
  bool busy() const;
  bool animating() const { return animation_.has_value(); }
  std::size_t invariant_violations_seen() const { return invariant_violations_; }

  /// Topic traffic produced since the last call.
  std::vector<RuntimeEvent> drain_events();

 private:
  struct Animation {
    bridge::MotionQueue motions;
    std::size_t index = 0;
    Vec3 from;
    double traveled = 0.0;
    bool plan_simulation = false;
  };

  struct PlanOutcome {
    std::optional<pddl::Plan> plan;
    bridge::MotionQueue motions;
    std::string error;
  };

  void step(double dt);
  void poll_jobs();
  void poll_detection();
  void poll_state();
  void apply_detection(const DetectionMessage& msg);
  void refresh_twin();
  bool mirror_cubes() const;
  bool mirror_robot() const;

  void fire(Trigger trigger);
  void set_notice(std::string notice);
  void log_event(std::string_view kind, nlohmann::json data = nlohmann::json::object());
  void log_progress(std::string_view where);
  void mark_twin();
  void check_twin();

  void enter_declarative();
  void clear_declarative();
  void start_animation(bridge::MotionQueue motions, bool plan_simulation);
  void advance_animation(double dt);
  void finish_planning(PlanOutcome outcome);
  void finish_execution(ExecutionReport report);

  RuntimeConfig config_;
  std::shared_ptr<ElementLink> element_;
  SessionMachine machine_;
  WorldState twin_;
  WorldState init_world_;       // declarative intervention start
  WorldState record_snapshot_;  // twin at record start
  Recording recording_;
  std::map<std::string, Vec3> edits_;
  std::optional<pddl::AtomSet> goal_;
  std::optional<pddl::Plan> plan_;
  bridge::MotionQueue motions_;
  std::optional<Animation> animation_;
  std::optional<ExecutionReport> last_report_;
  std::future<PlanOutcome> plan_job_;
  std::future<ExecutionReport> exec_job_;

  std::optional<DetectionMessage> latest_detection_;
  double last_detection_ms_ = 0.0;
  std::optional<RobotState> element_state_;
  bool stale_ = false;
  bool element_down_ = false;

  double now_ms_ = 0.0;
  double next_poll_ms_ = 0.0;
  double next_camera_ms_ = 0.0;
  double next_twin_ms_ = 0.0;
  bool twin_dirty_ = true;
  std::string notice_;
  std::vector<RuntimeEvent> events_;
  metrics::SessionLog log_;
  std::size_t invariant_violations_ = 0;
};

}  // namespace twinloop::runtime
