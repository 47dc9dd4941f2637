#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trimerge/merge.hpp"
#include "trimerge/strategies.hpp"
#include "trimerge/text.hpp"

namespace trimerge {

struct ScenarioFile {
  std::string path;  // relative, '/'-separated
  Document base;
  Document left;
  Document right;
};

struct MergeScenario {
  std::string id;
  std::vector<ScenarioFile> files;  // sorted by path
  std::map<std::string, Document> expected;
  std::map<std::string, std::string> tags;
  std::string notes;
};

enum class Label { correct, incorrect, unhandled };

std::string_view to_string(Label label) noexcept;
std::optional<Label> parse_label(std::string_view name);

enum class CompareMode { exact, ignore_space };

std::string_view to_string(CompareMode mode) noexcept;
std::optional<CompareMode> parse_compare_mode(std::string_view name);

/// Document equality used to judge a merge against its expected output.
bool documents_match(const Document& a, const Document& b, CompareMode mode);

struct FileDetail {
  std::string path;
  std::size_t conflicts = 0;  // as produced by the tool
  bool completed = false;     // clean, possibly after the fixup ran
  bool matches = false;       // completed and equal to expected
  friend bool operator==(const FileDetail&, const FileDetail&) = default;
};

struct Outcome {
  Label label = Label::unhandled;
  bool reclassified = false;
  std::vector<FileDetail> files;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Tool output for one scenario, keyed by file path.
using ScenarioResult = std::map<std::string, MergeResult>;

Outcome classify(const MergeScenario& scenario, const ScenarioResult& results,
                 const Fixup& fixup, CompareMode compare = CompareMode::exact);

struct Tally {
  std::size_t num_merges = 0;
  std::size_t num_correct = 0;
  std::size_t num_incorrect = 0;
  std::size_t num_unhandled = 0;

  void add(Label label);
  Tally& operator+=(const Tally& other);
  friend bool operator==(const Tally&, const Tally&) = default;
};

class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// 1 - (unhandled + k * incorrect) / merges. Throws UndefinedMetric for an
/// empty tally and std::invalid_argument unless k > 0.
double effort_reduction(const Tally& t, double k);

struct ErPoint {
  double k = 0;
  double er = 0;
  friend bool operator==(const ErPoint&, const ErPoint&) = default;
};

std::vector<ErPoint> er_curve(const Tally& t, const std::vector<double>& k_grid);

/// The k at which two tools' curves meet, or nullopt if they are parallel.
std::optional<double> er_crossover(const Tally& a, const Tally& b);

/// 20 points, log-spaced over [0.25, 16].
std::vector<double> default_k_grid();

/// "1,2,3" or "lo:hi[:n]" (n log-spaced points, default 20; lo == hi gives
/// a single point). Throws std::invalid_argument.
std::vector<double> parse_k_grid(std::string_view spec);

class InputMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PairwiseMatrix {
  std::vector<std::string> tools;
  std::vector<std::vector<std::size_t>> counts;
  friend bool operator==(const PairwiseMatrix&, const PairwiseMatrix&) = default;
};

/// Per tool, per scenario id.
using ResultTable = std::map<std::string, std::map<std::string, ScenarioResult>>;

/// Entry (i, j) counts scenarios where both tools are clean and their
/// outputs differ. Throws InputMismatch if the tools saw different
/// scenarios or files.
PairwiseMatrix pairwise_distinct(const std::vector<std::string>& tools,
                                 const ResultTable& results,
                                 CompareMode compare = CompareMode::exact);

struct RuntimeStats {
  double mean_ns = 0;
  double median_ns = 0;
  double max_ns = 0;
  friend bool operator==(const RuntimeStats&, const RuntimeStats&) = default;
};

double median_of(std::vector<double> samples);

/// Throws UndefinedMetric when samples is empty.
RuntimeStats runtime_stats(const std::vector<double>& samples_ns);

struct TaggedLabel {
  const std::map<std::string, std::string>* tags;
  Label label;
};

inline constexpr std::string_view kUntagged = "untagged";

std::map<std::string, Tally> breakdown_by_tag(const std::vector<TaggedLabel>& items,
                                              const std::string& tag_key);

// --- Whole-corpus evaluation -----------------------------------------------

struct EvalConfig {
  std::vector<std::string> tools;
  CompareMode compare = CompareMode::exact;
  std::string fixup = "ivn";
  std::vector<double> k_grid = default_k_grid();
  std::string tag_key = "source";
  std::size_t jobs = 1;
  bool timed = false;  // median of 3 runs per cell
  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

/// The fixup actually used for a tool: a tool is never checked by itself.
std::string effective_fixup(const std::string& tool, const std::string& fixup);

struct Cell {
  std::string tool;
  std::string scenario;
  std::string fixup;
  Outcome outcome;
  std::size_t conflicts = 0;
  std::optional<double> elapsed_ns;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct ToolSummary {
  std::string tool;
  Tally tally;
  std::vector<ErPoint> er;
  std::map<std::string, Tally> breakdown;
  std::optional<RuntimeStats> runtime;
  friend bool operator==(const ToolSummary&, const ToolSummary&) = default;
};

struct Report {
  std::string corpus;
  EvalConfig config;
  std::vector<std::string> scenarios;
  std::vector<Cell> cells;  // tool-major, in config.tools then scenario order
  std::vector<ToolSummary> summaries;
  PairwiseMatrix pairwise;
  friend bool operator==(const Report&, const Report&) = default;
};

/// Runs every (tool, scenario) cell on config.jobs workers. Duplicate tool
/// names are dropped. Throws UnknownTool.
Report evaluate(const std::string& corpus_name,
                const std::vector<MergeScenario>& scenarios,
                EvalConfig config);

}  // namespace trimerge
