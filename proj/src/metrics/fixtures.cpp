#include "twinloop/metrics/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "twinloop/common/error.hpp"
#include "twinloop/metrics/metrics.hpp"

namespace twinloop::metrics {
namespace {

struct RawRow {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

struct RawTable {
  std::string path;
  std::vector<RawRow> rows;
  std::optional<RawRow> average;
};

RawTable read_table(const std::string& dir, const std::string& name) {
  RawTable table;
  table.path = dir + "/" + name;
  std::ifstream in(table.path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + table.path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    RawRow row{line_no, {}};
    for (std::string w; words >> w;) row.cells.push_back(w);
    if (row.cells.empty() || row.cells.front().starts_with('#')) continue;
    if (row.cells.front() == "Av.") {
      table.average = std::move(row);
    } else {
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

[[noreturn]] void bad_cell(const RawTable& t, const RawRow& row, const std::string& cell) {
  throw Error(ErrorCode::kMalformedLog,
              t.path + ":" + std::to_string(row.line) + ": cannot read cell '" + cell + "'");
}

std::optional<double> number_cell(const RawTable& t, const RawRow& row, std::size_t i) {
  if (i >= row.cells.size()) bad_cell(t, row, "<missing>");
  std::string s = row.cells[i];
  if (s == "N/A") return std::nullopt;
  std::replace(s.begin(), s.end(), ',', '.');
  if (!s.empty() && s.back() == '%') s.pop_back();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) bad_cell(t, row, row.cells[i]);
    return v;
  } catch (const std::logic_error&) {
    bad_cell(t, row, row.cells[i]);
  }
}

// "0(3)*" -> 0, "2(6)" -> 2 with note 6.
int int_cell(const RawTable& t, const RawRow& row, std::size_t i, std::optional<int>* note = nullptr) {
  if (i >= row.cells.size()) bad_cell(t, row, "<missing>");
  const std::string& s = row.cells[i];
  int value = 0;
  int extra = 0;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%d%n", &value, &consumed) != 1) bad_cell(t, row, s);
  if (note != nullptr && std::sscanf(s.c_str() + consumed, "(%d)", &extra) == 1) *note = extra;
  return value;
}

void require_width(const RawTable& t, const RawRow& row, std::size_t width) {
  if (row.cells.size() != width) {
    throw Error(ErrorCode::kMalformedLog, t.path + ":" + std::to_string(row.line) + ": expected " +
                                              std::to_string(width) + " cells, got " +
                                              std::to_string(row.cells.size()));
  }
}

SusTable read_sus(const std::string& dir, const std::string& name) {
  const auto t = read_table(dir, name);
  SusTable sus;
  for (const auto& row : t.rows) {
    require_width(t, row, 12);
    sus.participants.push_back(int_cell(t, row, 0));
    std::vector<int> answers;
    for (std::size_t i = 1; i <= 10; ++i) answers.push_back(int_cell(t, row, i));
    sus.answers.push_back(std::move(answers));
    sus.published_scores.push_back(number_cell(t, row, 11).value_or(NAN));
  }
  if (t.average) {
    require_width(t, *t.average, 12);
    for (std::size_t i = 1; i <= 10; ++i) {
      sus.published_item_averages.push_back(number_cell(t, *t.average, i).value_or(NAN));
    }
    sus.published_average = number_cell(t, *t.average, 11);
  }
  return sus;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

void check_sus(const SusTable& sus, const std::string& label, double recomputed_avg,
               std::vector<std::string>& notes) {
  for (std::size_t i = 0; i < sus.answers.size(); ++i) {
    const double score = sus_score(sus.answers[i]);
    if (std::abs(score - sus.published_scores[i]) > 1e-9) {
      notes.push_back("SUS " + label + " participant " + std::to_string(sus.participants[i]) +
                      fmt(": answers score %.1f, published %.1f", score, sus.published_scores[i]));
    }
  }
  const auto items = item_averages(sus.answers);
  for (std::size_t i = 0; i < sus.published_item_averages.size() && i < items.size(); ++i) {
    if (std::abs(items[i] - sus.published_item_averages[i]) > 0.05 + 1e-9) {
      notes.push_back("SUS " + label + " Q" + std::to_string(i + 1) +
                      fmt(" average %.1f, published %.1f", items[i], sus.published_item_averages[i]));
    }
  }
  if (sus.published_average && std::abs(*sus.published_average - recomputed_avg) > 0.005) {
    double published_rows = 0.0;
    for (double s : sus.published_scores) published_rows += s;
    published_rows /= static_cast<double>(sus.published_scores.size());
    notes.push_back("SUS " + label + fmt(" average from answers %.2f, published %.2f", recomputed_avg,
                                         *sus.published_average) +
                    fmt(" (mean of published row scores %.2f)", published_rows));
  }
}

}  // namespace

FixtureSet load_fixtures(const std::string& dir) {
  FixtureSet set;

  const auto times = read_table(dir, "completion_times.txt");
  for (const auto& row : times.rows) {
    require_width(times, row, 3);
    set.completion.push_back(
        {int_cell(times, row, 0), number_cell(times, row, 1), number_cell(times, row, 2)});
  }

  const auto eff = read_table(dir, "effectiveness.txt");
  for (const auto& row : eff.rows) {
    require_width(eff, row, 5);
    set.effectiveness.push_back({int_cell(eff, row, 0), int_cell(eff, row, 1), int_cell(eff, row, 2),
                                 int_cell(eff, row, 3), int_cell(eff, row, 4)});
  }

  set.sus_procedural = read_sus(dir, "sus_procedural.txt");
  set.sus_declarative = read_sus(dir, "sus_declarative.txt");

  const auto pres = read_table(dir, "presence.txt");
  for (const auto& row : pres.rows) {
    require_width(pres, row, 10);
    PresenceRow p;
    p.participant = int_cell(pres, row, 0);
    for (std::size_t i = 1; i <= 7; ++i) {
      p.answers.push_back(int_cell(pres, row, i, i == 6 ? &p.published_reversed : nullptr));
    }
    p.published_total = int_cell(pres, row, 8);
    p.published_percent = static_cast<int>(std::lround(number_cell(pres, row, 9).value_or(NAN)));
    set.presence.push_back(std::move(p));
  }
  return set;
}

Summary summarize(const FixtureSet& f) {
  Summary s;
  std::vector<std::optional<double>> proc_times;
  std::vector<std::optional<double>> decl_times;
  for (const auto& row : f.completion) {
    proc_times.push_back(row.procedural);
    decl_times.push_back(row.declarative);
  }
  s.efficiency_procedural = efficiency(proc_times);
  s.efficiency_declarative = efficiency(decl_times);

  std::vector<int> pvr, prw, dvr, drw;
  for (const auto& row : f.effectiveness) {
    pvr.push_back(row.procedural_vr);
    prw.push_back(row.procedural_real);
    dvr.push_back(row.declarative_vr);
    drw.push_back(row.declarative_real);
  }
  s.effectiveness_vr_procedural = effectiveness(pvr);
  s.effectiveness_element_procedural = effectiveness(prw);
  s.effectiveness_vr_declarative = effectiveness(dvr);
  s.effectiveness_element_declarative = effectiveness(drw);

  auto sus_mean = [](const SusTable& t) {
    double sum = 0.0;
    for (const auto& a : t.answers) sum += sus_score(a);
    return t.answers.empty() ? 0.0 : sum / static_cast<double>(t.answers.size());
  };
  s.sus_procedural = sus_mean(f.sus_procedural);
  s.sus_declarative = sus_mean(f.sus_declarative);
  s.sus_procedural_published = f.sus_procedural.published_average;
  s.sus_declarative_published = f.sus_declarative.published_average;
  check_sus(f.sus_procedural, "procedural", s.sus_procedural, s.notes);
  check_sus(f.sus_declarative, "declarative", s.sus_declarative, s.notes);

  int total_sum = 0;
  for (const auto& row : f.presence) {
    const auto score = presence_score(row.answers);
    total_sum += score.total;
    s.presence_row_percent.push_back(score.percent);
    const std::string who = "presence participant " + std::to_string(row.participant);
    if (row.published_reversed && *row.published_reversed != 8 - row.answers[kReversedPresenceItem]) {
      s.notes.push_back(who + ": reversed PQ6 printed as " + std::to_string(*row.published_reversed));
    }
    if (score.total != row.published_total) {
      s.notes.push_back(who + ": total " + std::to_string(score.total) + ", published " +
                        std::to_string(row.published_total));
    }
    if (std::abs(score.percent - row.published_percent) > 1) {
      s.notes.push_back(who + ": " + std::to_string(score.percent) + "%, published " +
                        std::to_string(row.published_percent) + "%");
    }
  }
  if (!f.presence.empty()) {
    s.presence_percent = static_cast<int>(
        std::lround(100.0 * total_sum / (49.0 * static_cast<double>(f.presence.size()))));
  }
  return s;
}

std::string format_report(const Summary& s) {
  std::string out;
  char buf[160];
  auto row = [&](const char* name, const std::string& a, const std::string& b) {
    std::snprintf(buf, sizeof buf, "%-34s %-12s %-12s\n", name, a.c_str(), b.c_str());
    out += buf;
  };
  auto num = [](double v, const char* suffix) { return fmt("%.2f", v) + suffix; };
  row("", "Procedural", "Declarative");
  row("Efficiency", num(s.efficiency_procedural, " s"), num(s.efficiency_declarative, " s"));
  row("Effectiveness of VR Interface", num(s.effectiveness_vr_procedural, "%"),
      num(s.effectiveness_vr_declarative, "%"));
  row("Effectiveness of Man. Element", num(s.effectiveness_element_procedural, "%"),
      num(s.effectiveness_element_declarative, "%"));
  const std::string presence = std::to_string(s.presence_percent) + "%";
  row("Presence Questionnaire", presence, presence);
  row("SUS", num(s.sus_procedural, ""), num(s.sus_declarative, ""));
  if (s.sus_procedural_published || s.sus_declarative_published) {
    row("SUS (published)",
        s.sus_procedural_published ? num(*s.sus_procedural_published, "") : "-",
        s.sus_declarative_published ? num(*s.sus_declarative_published, "") : "-");
  }
  if (!s.notes.empty()) {
    out += "\nmismatches against published cells:\n";
    for (const auto& n : s.notes) out += "  " + n + "\n";
  }
  return out;
}

}  // namespace twinloop::metrics
