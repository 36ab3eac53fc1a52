#include <doctest.h>

#include <array>
#include <numeric>

#include "check.hpp"
#include "support.hpp"
#include "twinloop/metrics/fixtures.hpp"
#include "twinloop/metrics/metrics.hpp"
#include "twinloop/metrics/session_log.hpp"

using namespace twinloop;
using namespace twinloop::metrics;

TEST_CASE("SUS hand-scored rows") {
  // odd items a-1, even items 5-a
  const std::array<int, 10> all_best{5, 1, 5, 1, 5, 1, 5, 1, 5, 1};
  CHECK(sus_score(all_best) == 100.0);
  const std::array<int, 10> all_three{3, 3, 3, 3, 3, 3, 3, 3, 3, 3};
  CHECK(sus_score(all_three) == 50.0);
  // (1+1+2+3+1 + 3+3+3+2+1) * 2.5
  const std::array<int, 10> proc_row1{2, 2, 2, 2, 3, 2, 4, 3, 2, 4};
  CHECK(sus_score(proc_row1) == 50.0);
  // (4+4+3+4+3 + 4+3+4+4+3) * 2.5, printed as 77.5 in the source table
  const std::array<int, 10> decl_row1{5, 1, 5, 2, 4, 1, 5, 1, 4, 2};
  CHECK(sus_score(decl_row1) == 90.0);

  const std::array<int, 9> short_row{3, 3, 3, 3, 3, 3, 3, 3, 3};
  CHECK_ERROR_CODE(sus_score(short_row), ErrorCode::kRangeError);
  const std::array<int, 10> out_of_range{6, 3, 3, 3, 3, 3, 3, 3, 3, 3};
  CHECK_ERROR_CODE(sus_score(out_of_range), ErrorCode::kRangeError);
}

TEST_CASE("presence with reversed PQ6") {
  const std::array<int, 7> row1{6, 6, 4, 4, 6, 2, 6};  // 6+6+4+4+6+6+6 = 38, 77.55 %
  const auto s = presence_score(row1);
  CHECK(s.total == 38);
  CHECK(s.percent == 78);
  const std::array<int, 7> worst{1, 1, 1, 1, 1, 7, 1};
  CHECK(presence_score(worst).total == 7);
  CHECK(presence_score(worst).percent == 14);
  const std::array<int, 7> bad{1, 1, 1, 1, 1, 8, 1};
  CHECK_ERROR_CODE(presence_score(bad), ErrorCode::kRangeError);
}

TEST_CASE("effectiveness and efficiency") {
  const std::array<int, 3> counts{3, 2, 1};
  CHECK(effectiveness(counts) == doctest::Approx(100.0 * 6 / 9));
  const std::array<int, 2> over{3, 4};
  CHECK_ERROR_CODE(effectiveness(over), ErrorCode::kRangeError);
  CHECK_ERROR_CODE(effectiveness(std::span<const int>{}), ErrorCode::kRangeError);

  const std::array<std::optional<double>, 3> times{10.0, std::nullopt, 20.0};
  CHECK(efficiency(times) == doctest::Approx(15.0));
  const std::array<std::optional<double>, 1> none{std::nullopt};
  CHECK_ERROR_CODE(efficiency(none), ErrorCode::kNoCompletedSessions);
}

TEST_CASE("rounding and item averages") {
  CHECK(round_to(2.25, 1) == doctest::Approx(2.3));
  CHECK(round_to(-2.25, 1) == doctest::Approx(-2.3));
  CHECK(round_to(80.544, 2) == doctest::Approx(80.54));
  CHECK(item_averages({{1, 2}, {2, 2}, {2, 3}}) == std::vector<double>{1.7, 2.3});
}

TEST_CASE("session log round trip and completion time") {
  SessionLog log;
  log.participant = "p99";
  log.strategy = Strategy::kDeclarative;
  log.add(0.0, "session-start");
  log.add(3.5, event::kModeSwitch, {{"to", "declarative"}});
  log.add(20.0, event::kExecuteClick);
  log.add(25.0, event::kSubtasks, {{"where", "vr"}, {"completed", 2}, {"total", 3}});
  log.add(30.0, event::kExecuteClick);
  log.add(31.0, event::kSubtasks, {{"where", "vr"}, {"completed", 3}, {"total", 3}});

  const auto back = read_session_log(write_session_log(log));
  CHECK(back.participant == "p99");
  CHECK(back.strategy == Strategy::kDeclarative);
  CHECK(back.events.size() == 6);
  CHECK(completion_time(back) == doctest::Approx(26.5));
  CHECK(subtasks(back, "vr")->completed == 3);
  CHECK_FALSE(subtasks(back, "element"));

  SessionLog idle;
  idle.strategy = Strategy::kProcedural;
  idle.add(0.0, event::kRecordClick);
  CHECK_FALSE(completion_time(idle));

  SessionLog no_start;
  no_start.add(1.0, event::kExecuteClick);
  CHECK_ERROR_CODE(completion_time(no_start), ErrorCode::kMalformedLog);
}

TEST_CASE("malformed logs") {
  CHECK_ERROR_CODE(read_session_log(""), ErrorCode::kMalformedLog);
  CHECK_ERROR_CODE(read_session_log("{not json"), ErrorCode::kMalformedLog);
  CHECK_ERROR_CODE(read_session_log(R"({"participant":"p","strategy":"procedural"}
{"kind":"record-click"})"),
                   ErrorCode::kMalformedLog);
  CHECK_ERROR_CODE(read_session_log(R"({"participant":"p","strategy":"procedural"}
{"t":5,"kind":"record-click"}
{"t":4,"kind":"execute-click"})"),
                   ErrorCode::kMalformedLog);
  CHECK(strategy_from_string("procedural") == Strategy::kProcedural);
  CHECK_ERROR_CODE(strategy_from_string("hybrid"), ErrorCode::kBadArguments);
}

TEST_CASE("bundled p01 log reproduces its table row") {
  const auto log = load_session_log(support::tables_path("logs/p01_procedural.jsonl"));
  CHECK(completion_time(log) == doctest::Approx(359.28 - 12.4));
  CHECK(subtasks(log, "element")->completed == 2);
  const auto fixtures = load_fixtures(support::tables_path(""));
  CHECK(*fixtures.completion.at(0).procedural == doctest::Approx(*completion_time(log)));
}

TEST_CASE("fixture summary against hand sums") {
  const auto f = load_fixtures(support::tables_path(""));
  REQUIRE(f.completion.size() == 14);
  REQUIRE(f.effectiveness.size() == 14);
  CHECK_FALSE(f.completion.at(9).procedural);
  CHECK(f.effectiveness.at(9).declarative_vr == 0);  // "0(3)*"
  CHECK(f.presence.at(0).published_reversed == 6);

  const double proc_sum = 346.88 + 301.82 + 114.37 + 52.34 + 131.75 + 87.14 + 146.69 + 94.39 + 272.21 + 139.44 +
                          70.02 + 187.65 + 298.47;
  const double decl_sum = 106.20 + 101.45 + 59.38 + 84.71 + 79.60 + 56.25 + 75.54 + 69.35 + 351.46 + 82.19 +
                          167.56 + 103.68 + 116.14;
  const auto s = summarize(f);
  CHECK(s.efficiency_procedural == doctest::Approx(proc_sum / 13));
  CHECK(s.efficiency_declarative == doctest::Approx(decl_sum / 13));
  CHECK(s.effectiveness_vr_procedural == doctest::Approx(100.0 * 39 / 42));
  CHECK(s.effectiveness_element_procedural == doctest::Approx(100.0 * 31 / 42));
  CHECK(s.effectiveness_element_declarative == doctest::Approx(100.0 * 34 / 42));
  CHECK(s.sus_procedural == doctest::Approx(63.75));
  CHECK(s.sus_declarative_published == 80.54);
  CHECK(s.presence_row_percent.front() == 78);
  CHECK(s.presence_row_percent.back() == 92);
  CHECK_FALSE(s.notes.empty());

  const auto report = format_report(s);
  CHECK(report.find("172.55") != std::string::npos);
  CHECK(report.find("111.81") != std::string::npos);
}

TEST_CASE("fixture errors") {
  CHECK_ERROR_CODE(load_fixtures("/nonexistent/dir"), ErrorCode::kIoError);
}
