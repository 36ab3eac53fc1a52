#include <doctest.h>

#include <sstream>

#include "check.hpp"
#include "support.hpp"
#include "twinloop/gateway/protocol.hpp"

using namespace twinloop;
using namespace twinloop::gateway;

namespace {

std::vector<std::string> golden_frames() {
  std::vector<std::string> out;
  std::istringstream in(support::read_text(support::golden_path("wire.jsonl")));
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("golden frames round trip byte for byte") {
  const auto frames = golden_frames();
  REQUIRE(frames.size() >= 20);
  for (const auto& f : frames) {
    CAPTURE(f);
    const auto m = decode(f);
    CHECK(encode(m) == f);
    CHECK(decode(encode(m)) == m);
  }
}

TEST_CASE("decoded fields") {
  const auto call = decode(R"({"args":{"on":true},"id":"c3","op":"call_service","service":"/robot/suction"})");
  CHECK(call.op == Op::kCallService);
  CHECK(call.name == "/robot/suction");
  CHECK(call.id == "c3");
  CHECK(call.payload == nlohmann::json{{"on", true}});

  const auto bare = decode(R"({"op":"call_service","service":"/control/stop"})");
  CHECK(bare.payload == nlohmann::json::object());
  CHECK(encode(bare) == R"({"args":{},"op":"call_service","service":"/control/stop"})");

  const auto resp = decode(R"({"op":"service_response","result":false,"service":"/x"})");
  CHECK_FALSE(resp.result);
  CHECK_FALSE(resp.id);

  const auto st = decode(R"({"level":"warning","msg":"hi","op":"status"})");
  CHECK(st.level == "warning");
  CHECK(st.name.empty());
}

TEST_CASE("key order does not matter on input") {
  const auto a = decode(R"({"service":"/s","op":"call_service","id":"1","args":{"b":1,"a":2}})");
  CHECK(encode(a) == R"({"args":{"a":2,"b":1},"id":"1","op":"call_service","service":"/s"})");
}

TEST_CASE("builders") {
  CHECK(encode(publish("/t", {{"k", 1}})) == R"({"msg":{"k":1},"op":"publish","topic":"/t"})");
  CHECK(encode(call_service("/s", nlohmann::json::object(), "7")) ==
        R"({"args":{},"id":"7","op":"call_service","service":"/s"})");
  CHECK(encode(service_response("/s", {{"mode", "Idle"}}, true, "7")) ==
        R"({"id":"7","op":"service_response","result":true,"service":"/s","values":{"mode":"Idle"}})");
  CHECK(encode(status("error", "boom")) == R"({"level":"error","msg":"boom","op":"status"})");
  CHECK(to_string(Op::kServiceResponse) == "service_response");
}

TEST_CASE("malformed frames") {
  const char* bad[] = {
      "",
      "not json",
      "[1,2]",
      "\"op\"",
      R"({"topic":"/t"})",
      R"({"op":"teleport","topic":"/t"})",
      R"({"op":7,"topic":"/t"})",
      R"({"op":"subscribe"})",
      R"({"op":"subscribe","topic":"t"})",
      R"({"op":"subscribe","topic":""})",
      R"({"op":"subscribe","topic":"/t","extra":1})",
      R"({"op":"subscribe","topic":"/t","id":5})",
      R"({"op":"subscribe","topic":"/t","type":false})",
      R"({"op":"publish","topic":"/t"})",
      R"({"op":"call_service","service":"/s","args":[1]})",
      R"({"op":"call_service","service":"/s","msg":{}})",
      R"({"op":"call_service","topic":"/s"})",
      R"({"op":"service_response","service":"/s"})",
      R"({"op":"service_response","service":"/s","result":"yes"})",
      R"({"op":"status","msg":"x"})",
      R"({"op":"status","level":"info","msg":{}})",
      R"({"op":"status","level":"info","msg":"x","topic":"/t"})",
      R"({"op":"subscribe","topic":"/t")",
  };
  for (const char* f : bad) {
    CAPTURE(f);
    CHECK_ERROR_CODE(decode(f), ErrorCode::kMalformedFrame);
  }
}

TEST_CASE("size and depth limits") {
  std::string deep = R"({"op":"publish","topic":"/t","msg":)" + std::string(100, '[') + std::string(100, ']') + "}";
  CHECK_ERROR_CODE(decode(deep), ErrorCode::kMalformedFrame);
  CHECK_FALSE(parse_bounded(deep));
  std::string ok = R"({"msg":)" + std::string(20, '[') + std::string(20, ']') + R"(,"op":"publish","topic":"/t"})";
  CHECK(encode(decode(ok)) == ok);
  // brackets inside strings do not count
  std::string quoted = R"({"msg":")" + std::string(200, '[') + R"(","op":"publish","topic":"/t"})";
  CHECK(encode(decode(quoted)) == quoted);

  std::string huge = R"({"msg":")" + std::string((1 << 20) + 10, 'a') + R"(","op":"publish","topic":"/t"})";
  CHECK_ERROR_CODE(decode(huge), ErrorCode::kMalformedFrame);
}
