#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trimerge/eval.hpp"

namespace trimerge {

inline constexpr int kCorpusSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One manifest record. Side directories default to <path>/base, <path>/left,
/// <path>/right and <path>/expected.
struct ManifestEntry {
  std::string id;
  std::string path;
  std::map<std::string, std::string> tags;
  std::string notes;
  std::optional<std::string> base;
  std::optional<std::string> left;
  std::optional<std::string> right;
  std::optional<std::string> expected;

  std::string side_dir(const std::string& side) const;
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Corpus {
  std::string name;
  std::vector<MergeScenario> scenarios;
};

/// Parses manifest.json text. Throws CorpusError on malformed records or
/// duplicate ids.
std::vector<ManifestEntry> parse_manifest(const std::string& json_text);

/// Reads and validates <root>/manifest.json; every referenced directory must
/// exist.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& root);

/// Loads one scenario. A path missing from a side tree is an empty document
/// on that side. Throws CorpusError when expected/ does not cover exactly
/// the paths present in base/left/right.
MergeScenario load_scenario(const std::filesystem::path& root,
                            const ManifestEntry& entry);

Corpus load_corpus(const std::filesystem::path& root);

/// Writes a corpus that load_corpus() reads back unchanged.
void write_corpus(const std::filesystem::path& root, const Corpus& corpus);

/// Scenarios transcribed from published merge examples, plus a constructed
/// reclassification case.
Corpus golden_corpus();

// --- Reports ---------------------------------------------------------------

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes report.jsonl, cells.csv, tallies.csv, er_curves.csv and
/// pairwise.csv into `dir`, creating it if needed. Throws ReportError.
void write_report(const std::filesystem::path& dir, const Report& report);

std::string report_jsonl(const Report& report);
Report parse_report_jsonl(const std::string& text);

/// Reads back report.jsonl from `dir`.
Report read_report(const std::filesystem::path& dir);

}  // namespace trimerge
