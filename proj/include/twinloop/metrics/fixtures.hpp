#pragma once

#include <optional>
#include <string>
#include <vector>

// Published evaluation tables as whitespace-separated text files. Lines
// starting with '#' are comments; a row whose first cell is "Av." holds the
// published averages. Cells may use comma decimals ("2,8"), a trailing '%',
// "N/A", annotated counts such as "0(3)*" (leading integer is the value) and
// "2(6)" (raw answer followed by its published reversed score).
namespace twinloop::metrics {

struct CompletionRow {
  int participant = 0;
  std::optional<double> procedural;
  std::optional<double> declarative;
};

struct EffectivenessRow {
  int participant = 0;
  int procedural_vr = 0;
  int procedural_real = 0;
  int declarative_vr = 0;
  int declarative_real = 0;
};

struct SusTable {
  std::vector<int> participants;
  std::vector<std::vector<int>> answers;
  std::vector<double> published_scores;
  std::vector<double> published_item_averages;
  std::optional<double> published_average;
};

struct PresenceRow {
  int participant = 0;
  std::vector<int> answers;  // raw, PQ6 not reversed
  std::optional<int> published_reversed;
  int published_total = 0;
  int published_percent = 0;
};

struct FixtureSet {
  std::vector<CompletionRow> completion;
  std::vector<EffectivenessRow> effectiveness;
  SusTable sus_procedural;
  SusTable sus_declarative;
  std::vector<PresenceRow> presence;
};

/// Reads completion_times.txt, effectiveness.txt, sus_procedural.txt,
/// sus_declarative.txt and presence.txt from `dir`.
/// Throws Error(kIoError | kMalformedLog).
FixtureSet load_fixtures(const std::string& dir);

struct Summary {
  double efficiency_procedural = 0.0;
  double efficiency_declarative = 0.0;
  double effectiveness_vr_procedural = 0.0;
  double effectiveness_vr_declarative = 0.0;
  double effectiveness_element_procedural = 0.0;
  double effectiveness_element_declarative = 0.0;
  double sus_procedural = 0.0;   // recomputed from answers
  double sus_declarative = 0.0;  // recomputed from answers
  std::optional<double> sus_procedural_published;
  std::optional<double> sus_declarative_published;
  int presence_percent = 0;
  std::vector<int> presence_row_percent;  // recomputed, fixture order
  std::vector<std::string> notes;         // mismatches against the published cells
};

Summary summarize(const FixtureSet& fixtures);

/// Plain-text table: one row per metric, procedural and declarative columns,
/// followed by the notes.
std::string format_report(const Summary& summary);

}  // namespace twinloop::metrics
