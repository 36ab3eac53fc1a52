#include <doctest.h>

#include "check.hpp"
#include "support.hpp"
#include "twinloop/gateway/script.hpp"

using namespace twinloop;
using namespace twinloop::gateway;
using nlohmann::json;

namespace {

ScriptOptions options() {
  ScriptOptions o;
  o.base_dir = support::data_path("scripts");
  o.animation_speed = 0.0;
  return o;
}

}  // namespace

TEST_CASE("parse_script") {
  const auto lines = parse_script(R"(# header
scene ../scenes/colorsort.yaml

/control/record
/robot/move_to {"x":1,"y":2,"z":3}
wait 250
await Done 5000
await Idle
expect {"mode":"Idle"}
)");
  REQUIRE(lines.size() == 7);
  CHECK(lines[0].kind == ScriptLine::Kind::kScene);
  CHECK(lines[0].line == 2);
  CHECK(lines[1].kind == ScriptLine::Kind::kCall);
  CHECK(lines[1].args == json::object());
  CHECK(lines[2].args["z"] == 3);
  CHECK(lines[3].ms == 250);
  CHECK(lines[4].name == "Done");
  CHECK(lines[4].ms == 5000);
  CHECK(lines[5].ms == 60000);
  CHECK(lines[6].kind == ScriptLine::Kind::kExpect);

  CHECK_ERROR_CODE(parse_script("wait soon"), ErrorCode::kBadArguments);
  CHECK_ERROR_CODE(parse_script("await Sleeping"), ErrorCode::kBadArguments);
  CHECK_ERROR_CODE(parse_script("/control/record {oops"), ErrorCode::kBadArguments);
  CHECK_ERROR_CODE(parse_script("/control/record [1]"), ErrorCode::kBadArguments);
  CHECK_ERROR_CODE(parse_script("jump 3"), ErrorCode::kBadArguments);
  CHECK_ERROR_CODE(parse_script("expect 3"), ErrorCode::kBadArguments);
}

TEST_CASE("json_subset") {
  CHECK(json_subset(json{{"a", 1}}, json{{"a", 1.0000001}, {"b", 2}}));
  CHECK_FALSE(json_subset(json{{"a", 1}}, json{{"a", 1.01}}));
  CHECK_FALSE(json_subset(json{{"c", 1}}, json{{"a", 1}}));
  CHECK(json_subset(json::array({1, json{{"k", "v"}}}), json::array({1, json{{"k", "v"}, {"z", 0}}})));
  CHECK_FALSE(json_subset(json::array({1}), json::array({1, 2})));
  CHECK_FALSE(json_subset(json("1"), json(1)));
}

TEST_CASE("bundled declarative script") {
  const auto r = run_script_file(support::data_path("scripts/colorsort_declarative.script"), options());
  CHECK_MESSAGE(r.ok, r.failure);
  REQUIRE(r.element_truth);
  CHECK(r.element_actuations > 0);
  CHECK(r.published.at("/session/mode") > 0);
  CHECK_FALSE(r.transcript.empty());
}

TEST_CASE("bundled procedural script") {
  const auto r = run_script_file(support::data_path("scripts/colorsort_procedural.script"), options());
  CHECK_MESSAGE(r.ok, r.failure);
  CHECK(r.element_actuations > 0);
}

TEST_CASE("failing expectations name the line") {
  const auto r = run_script("scene ../scenes/colorsort.yaml\nexpect {\"mode\":\"Done\"}\n", options());
  CHECK_FALSE(r.ok);
  CHECK(r.failure.rfind("line 2", 0) == 0);

  const auto call = run_script(
      "scene ../scenes/colorsort.yaml\n/control/execute\nexpect {\"last\":{\"result\":true}}\n", options());
  CHECK_FALSE(call.ok);
  CHECK(call.failure.rfind("line 3", 0) == 0);

  const auto timeout = run_script("scene ../scenes/colorsort.yaml\nawait Done 100\n", options());
  CHECK_FALSE(timeout.ok);
  CHECK(timeout.failure.rfind("line 2", 0) == 0);

  CHECK_ERROR_CODE(run_script("/control/record\n", options()), ErrorCode::kBadArguments);
}

TEST_CASE("scene override and element drop") {
  auto o = options();
  o.element.drop_service_at = 2;
  const auto r = run_script_file(support::data_path("scripts/colorsort_declarative.script"), o);
  CHECK_FALSE(r.ok);
  CHECK(r.element_actuations == 3);
}
