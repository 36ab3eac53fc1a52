#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "twinloop/bridge/bridge.hpp"
#include "twinloop/common/error.hpp"
#include "twinloop/gateway/scene_file.hpp"
#include "twinloop/gateway/script.hpp"
#include "twinloop/gateway/server.hpp"
#include "twinloop/kinematics/kinematics.hpp"
#include "twinloop/metrics/fixtures.hpp"
#include "twinloop/metrics/metrics.hpp"
#include "twinloop/metrics/session_log.hpp"
#include "twinloop/pddl/blocksworld.hpp"
#include "twinloop/pddl/emit.hpp"
#include "twinloop/pddl/grounding.hpp"
#include "twinloop/pddl/parser.hpp"
#include "twinloop/planner/planner.hpp"
#include "twinloop/runtime/runtime.hpp"

namespace twinloop::cli {
namespace {

volatile std::sig_atomic_t g_interrupted = 0;
extern "C" void on_signal(int) { g_interrupted = 1; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

pddl::Domain load_domain(const std::string& path) {
  if (path.empty()) return pddl::extended_blocksworld();
  return pddl::parse_domain(read_file(path));
}

world::Vec3 parse_point(const std::string& text) {
  world::Vec3 v;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> v.x >> c1 >> v.y >> c2 >> v.z) || c1 != ',' || c2 != ',' || !in.eof())
    throw Error(ErrorCode::kBadArguments, "expected x,y,z, got '" + text + "'");
  return v;
}

std::uint16_t default_port() {
  if (const char* env = std::getenv("TWINLOOP_PORT")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 0 && v <= 65535) return static_cast<std::uint16_t>(v);
    throw Error(ErrorCode::kBadArguments, std::string("TWINLOOP_PORT is not a port: ") + env);
  }
  return 9090;
}

struct SearchFlags {
  bool optimal = false;
  bool greedy = false;

  std::optional<planner::SearchMode> mode() const {
    if (optimal) return planner::SearchMode::kOptimal;
    if (greedy) return planner::SearchMode::kGreedy;
    return std::nullopt;
  }
};

void add_search_flags(CLI::App* cmd, SearchFlags& flags) {
  auto* o = cmd->add_flag("--optimal", flags.optimal, "Breadth-first search, shortest plan");
  auto* g = cmd->add_flag("--greedy", flags.greedy, "A* with the goal-count heuristic");
  o->excludes(g);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Digital twin, planner and gateway for a suction-cup arm cube world", "twinloop"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the WebSocket gateway against a simulated element");
  std::string serve_scene;
  std::optional<int> serve_port;
  std::string serve_address = "127.0.0.1";
  double serve_noise = 0.0;
  std::uint64_t serve_seed = 1;
  std::optional<std::size_t> serve_drop;
  std::string serve_log;
  std::string serve_participant = "p00";
  double serve_for = 0.0;
  serve->add_option("--scene", serve_scene, "Scene file (YAML)")->required()->check(CLI::ExistingFile);
  serve->add_option("--port", serve_port, "Listen port (default $TWINLOOP_PORT or 9090; 0 picks one)")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--address", serve_address, "Listen address");
  serve->add_option("--noise", serve_noise, "Detector noise sigma in mm")->check(CLI::NonNegativeNumber);
  serve->add_option("--seed", serve_seed, "Detector noise seed");
  serve->add_option("--drop-service-at", serve_drop, "Fail element actuation calls from index N on");
  serve->add_option("--log", serve_log, "Write the session log (JSONL) on exit");
  serve->add_option("--participant", serve_participant, "Participant id for the session log");
  serve->add_option("--for", serve_for, "Stop after this many seconds (0 = until interrupted)");

  // solve
  auto* solve = app.add_subcommand("solve", "Plan for a PDDL problem");
  std::string solve_domain, solve_problem;
  SearchFlags solve_flags;
  std::size_t solve_budget = 1'000'000;
  bool solve_stats = false;
  solve->add_option("--domain", solve_domain, "Domain file (default: bundled extended Blocksworld)")
      ->check(CLI::ExistingFile);
  solve->add_option("--problem", solve_problem, "Problem file")->required()->check(CLI::ExistingFile);
  solve->add_option("--budget", solve_budget, "Node expansion budget");
  solve->add_flag("--stats", solve_stats, "Print search statistics to stderr");
  add_search_flags(solve, solve_flags);

  // parse
  auto* parse = app.add_subcommand("parse", "Parse PDDL and print it back");
  std::string parse_domain_path, parse_problem_path;
  bool parse_ast = false;
  parse->add_option("--domain", parse_domain_path, "Domain file (default: bundled)")->check(CLI::ExistingFile);
  parse->add_option("--problem", parse_problem_path, "Problem file")->check(CLI::ExistingFile);
  parse->add_flag("--ast", parse_ast, "Print the structural AST dump of the domain");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a plan against a problem");
  std::string val_domain, val_problem, val_plan;
  validate->add_option("--domain", val_domain, "Domain file (default: bundled)")->check(CLI::ExistingFile);
  validate->add_option("--problem", val_problem, "Problem file")->required()->check(CLI::ExistingFile);
  validate->add_option("--plan", val_plan, "Plan file")->required()->check(CLI::ExistingFile);

  // extract
  auto* extract = app.add_subcommand("extract", "Print the PDDL atoms of a scene");
  std::string extract_scene;
  bool extract_problem = false;
  extract->add_option("--scene", extract_scene, "Scene file")->required()->check(CLI::ExistingFile);
  extract->add_flag("--problem", extract_problem, "Print a full problem with an empty-goal placeholder instead");

  // motions
  auto* motions = app.add_subcommand("motions", "Expand a plan into motion primitives");
  std::string motions_plan, motions_scene;
  motions->add_option("--plan", motions_plan, "Plan file")->required()->check(CLI::ExistingFile);
  motions->add_option("--scene", motions_scene, "Scene file")->required()->check(CLI::ExistingFile);

  // ik
  auto* ik = app.add_subcommand("ik", "Inverse kinematics for an effector target");
  std::string ik_target, ik_scene;
  ik->add_option("--target", ik_target, "x,y,z in mm")->required();
  ik->add_option("--scene", ik_scene, "Scene file for arm geometry")->check(CLI::ExistingFile);

  // session
  auto* session = app.add_subcommand("session", "Run a headless scripted session");
  std::string session_script, session_scene, session_log, session_transcript;
  double session_noise = 0.0;
  std::uint64_t session_seed = 1;
  std::optional<std::size_t> session_drop;
  std::string session_participant = "p00";
  double session_speed = 100.0;
  SearchFlags session_flags;
  session->add_option("--script", session_script, "Script file")->required()->check(CLI::ExistingFile);
  session->add_option("--scene", session_scene, "Scene file (overrides the script's scene line)")
      ->check(CLI::ExistingFile);
  session->add_option("--noise", session_noise, "Detector noise sigma in mm")->check(CLI::NonNegativeNumber);
  session->add_option("--seed", session_seed, "Detector noise seed");
  session->add_option("--drop-service-at", session_drop, "Fail element actuation calls from index N on");
  session->add_option("--log", session_log, "Write the session log (JSONL)");
  session->add_option("--transcript", session_transcript, "Write the request/response frames");
  session->add_option("--participant", session_participant, "Participant id for the session log");
  session->add_option("--speed", session_speed, "Twin animation speed in mm/s (<= 0: instant)");
  add_search_flags(session, session_flags);

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Evaluation metrics from fixtures or session logs");
  std::string metrics_fixtures;
  bool metrics_report = false;
  std::vector<std::string> metrics_logs;
  metrics_cmd->add_option("--fixtures", metrics_fixtures, "Directory with the table fixtures")
      ->check(CLI::ExistingDirectory);
  metrics_cmd->add_flag("--report", metrics_report, "Print the summary table");
  metrics_cmd->add_option("--log", metrics_logs, "Session log files (JSONL)")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*serve) {
      const auto scene = gateway::load_scene(serve_scene);
      const auto truth = gateway::make_world(scene);
      runtime::ElementOptions element_options;
      element_options.noise_sigma = serve_noise > 0 ? serve_noise : scene.config.detector_noise;
      element_options.seed = serve_seed;
      element_options.drop_service_at = serve_drop;
      auto element = std::make_shared<runtime::SimulatedElement>(truth, scene.config, element_options);
      runtime::RuntimeConfig config;
      config.scene = scene.config;
      config.async_jobs = true;
      config.participant = serve_participant;
      runtime::Runtime rt(config, element, truth);

      gateway::ServerOptions options;
      options.address = serve_address;
      options.port = serve_port ? static_cast<std::uint16_t>(*serve_port) : default_port();
      gateway::Server server(rt, options);
      server.start();
      out << "listening on ws://" << serve_address << ":" << server.port() << "\n" << std::flush;

      g_interrupted = 0;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const auto started = std::chrono::steady_clock::now();
      while (!g_interrupted) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        if (serve_for > 0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count() >= serve_for)
          break;
      }
      server.stop();
      std::signal(SIGINT, SIG_DFL);
      std::signal(SIGTERM, SIG_DFL);
      if (!serve_log.empty()) metrics::save_session_log(rt.log(), serve_log);
      return 0;
    }

    if (*solve) {
      const auto domain = load_domain(solve_domain);
      const auto problem = pddl::parse_problem(read_file(solve_problem), domain);
      planner::SearchConfig sc;
      std::size_t blocks = 0;
      for (const auto& [name, type] : problem.objects)
        if (type == "block") ++blocks;
      sc.mode = solve_flags.mode().value_or(planner::default_mode(blocks));
      sc.node_budget = solve_budget;
      planner::SearchStats stats;
      const auto plan = planner::solve(domain, problem, sc, &stats);
      out << pddl::emit_plan(plan);
      if (solve_stats)
        err << "mode " << planner::to_string(sc.mode) << ", length " << plan.size() << ", expanded "
            << stats.expanded << ", generated " << stats.generated << "\n";
      return 0;
    }

    if (*parse) {
      const auto domain = load_domain(parse_domain_path);
      if (!parse_problem_path.empty()) {
        out << pddl::emit_problem(pddl::parse_problem(read_file(parse_problem_path), domain));
      } else if (parse_ast) {
        out << pddl::dump_ast(domain);
      } else {
        out << pddl::emit_domain(domain);
      }
      return 0;
    }

    if (*validate) {
      const auto domain = load_domain(val_domain);
      const auto problem = pddl::parse_problem(read_file(val_problem), domain);
      const auto plan = pddl::parse_plan(read_file(val_plan));
      const auto result = pddl::validate_plan(domain, problem, plan);
      if (result.valid) {
        out << "valid plan, " << plan.size() << " steps\n";
        return 0;
      }
      out << "invalid plan";
      if (result.failed_step) out << " at step " << *result.failed_step + 1;
      out << ": " << result.reason << "\n";
      return 1;
    }

    if (*extract) {
      const auto scene = gateway::load_scene(extract_scene);
      const auto world = gateway::make_world(scene);
      const auto init = bridge::extract_init(world, scene.config);
      if (extract_problem) {
        pddl::Problem p;
        p.name = "scene";
        p.domain = pddl::extended_blocksworld().name;
        p.objects = bridge::objects_of(world);
        p.init = init;
        out << pddl::emit_problem(p);
      } else {
        out << pddl::to_string(init);
      }
      return 0;
    }

    if (*motions) {
      const auto scene = gateway::load_scene(motions_scene);
      const auto world = gateway::make_world(scene);
      const auto plan = pddl::parse_plan(read_file(motions_plan));
      for (const auto& p : bridge::plan_to_motions(plan, world, scene.config)) out << bridge::to_string(p) << "\n";
      return 0;
    }

    if (*ik) {
      const world::SceneConfig config = ik_scene.empty() ? world::SceneConfig{} : gateway::load_scene(ik_scene).config;
      const auto target = parse_point(ik_target);
      const auto joints = kinematics::inverse(target, config);
      const auto back = kinematics::forward(joints, config);
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "base_yaw %.6f rad (%.3f deg)\nrear_elevation %.6f rad (%.3f deg)\n"
                    "fore_elevation %.6f rad (%.3f deg)\nforward %.6f %.6f %.6f\n",
                    joints.base_yaw, joints.base_yaw * 180.0 / std::numbers::pi, joints.rear_elevation,
                    joints.rear_elevation * 180.0 / std::numbers::pi, joints.fore_elevation,
                    joints.fore_elevation * 180.0 / std::numbers::pi, back.x, back.y, back.z);
      out << buf;
      return 0;
    }

    if (*session) {
      gateway::ScriptOptions options;
      if (!session_scene.empty()) options.scene = session_scene;
      options.element.noise_sigma = session_noise;
      options.element.seed = session_seed;
      options.element.drop_service_at = session_drop;
      options.participant = session_participant;
      options.search_mode = session_flags.mode();
      options.animation_speed = session_speed;
      const auto result = gateway::run_script_file(session_script, options);
      if (!session_log.empty()) metrics::save_session_log(result.log, session_log);
      if (!session_transcript.empty()) {
        std::ofstream t(session_transcript);
        if (!t) throw Error(ErrorCode::kIoError, "cannot write " + session_transcript);
        for (const auto& line : result.transcript) t << line << "\n";
      }
      const auto vr = metrics::subtasks(result.log, "vr");
      const auto el = metrics::subtasks(result.log, "element");
      if (vr) out << "subtasks vr " << vr->completed << "/" << vr->total << "\n";
      if (el) out << "subtasks element " << el->completed << "/" << el->total << "\n";
      if (const auto t = metrics::completion_time(result.log)) {
        std::ostringstream secs;
        secs << std::fixed << std::setprecision(2) << *t;
        out << "completion time " << secs.str() << " s\n";
      }
      if (!result.ok) {
        out << "session failed: " << result.failure << "\n";
        return 1;
      }
      out << "session ok\n";
      return 0;
    }

    if (*metrics_cmd) {
      if (metrics_fixtures.empty() && metrics_logs.empty())
        throw Error(ErrorCode::kBadArguments, "metrics needs --fixtures or --log");
      if (!metrics_fixtures.empty()) {
        const auto summary = metrics::summarize(metrics::load_fixtures(metrics_fixtures));
        if (metrics_report || metrics_logs.empty()) out << metrics::format_report(summary);
      }
      if (!metrics_logs.empty()) {
        std::vector<std::optional<double>> times;
        for (const auto& path : metrics_logs) {
          const auto log = metrics::load_session_log(path);
          const auto t = metrics::completion_time(log);
          times.push_back(t);
          out << log.participant << " " << metrics::to_string(log.strategy) << " time ";
          if (t) out << *t << " s";
          else out << "N/A";
          for (const char* where : {"vr", "element"})
            if (const auto s = metrics::subtasks(log, where))
              out << " " << where << " " << s->completed << "/" << s->total;
          out << "\n";
        }
        bool any = false;
        for (const auto& t : times) any = any || t.has_value();
        if (any) out << "efficiency " << metrics::efficiency(times) << " s\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace twinloop::cli
