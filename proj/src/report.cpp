#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "trimerge/corpus.hpp"

namespace trimerge {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kOracleNote =
    "outputs are judged against expected files, not by running test suites";

ordered_json record(const char* kind) {
  ordered_json j;
  j["record"] = kind;
  j["schema_version"] = kReportSchemaVersion;
  return j;
}

ordered_json tally_json(const Tally& t) {
  ordered_json j;
  j["merges"] = t.num_merges;
  j["correct"] = t.num_correct;
  j["incorrect"] = t.num_incorrect;
  j["unhandled"] = t.num_unhandled;
  return j;
}

Tally tally_from(const ordered_json& j) {
  Tally t;
  t.num_merges = j.at("merges").get<std::size_t>();
  t.num_correct = j.at("correct").get<std::size_t>();
  t.num_incorrect = j.at("incorrect").get<std::size_t>();
  t.num_unhandled = j.at("unhandled").get<std::size_t>();
  if (t.num_merges != t.num_correct + t.num_incorrect + t.num_unhandled) {
    throw ReportError("tally counts do not add up");
  }
  return t;
}

std::string number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw ReportError("cannot write " + p.string());
}

}  // namespace

std::string report_jsonl(const Report& r) {
  std::string out;
  const auto emit = [&](const ordered_json& j) {
    out += j.dump();
    out += '\n';
  };

  auto header = record("header");
  header["corpus"] = r.corpus;
  header["oracle"] = kOracleNote;
  header["tools"] = r.config.tools;
  header["compare"] = std::string(to_string(r.config.compare));
  header["fixup"] = r.config.fixup;
  header["k_grid"] = r.config.k_grid;
  header["tag_key"] = r.config.tag_key;
  header["timed"] = r.config.timed;
  header["scenarios"] = r.scenarios;
  emit(header);

  for (const auto& c : r.cells) {
    auto j = record("cell");
    j["tool"] = c.tool;
    j["scenario"] = c.scenario;
    j["fixup"] = c.fixup;
    j["label"] = std::string(to_string(c.outcome.label));
    j["reclassified"] = c.outcome.reclassified;
    j["conflicts"] = c.conflicts;
    j["files"] = ordered_json::array();
    for (const auto& f : c.outcome.files) {
      ordered_json fj;
      fj["path"] = f.path;
      fj["conflicts"] = f.conflicts;
      fj["completed"] = f.completed;
      fj["matches"] = f.matches;
      j["files"].push_back(std::move(fj));
    }
    if (c.elapsed_ns) j["elapsed_ns"] = *c.elapsed_ns;
    emit(j);
  }

  for (const auto& s : r.summaries) {
    auto t = record("tally");
    t["tool"] = s.tool;
    t["tally"] = tally_json(s.tally);
    emit(t);

    auto e = record("er");
    e["tool"] = s.tool;
    e["points"] = ordered_json::array();
    for (const auto& p : s.er) e["points"].push_back({p.k, p.er});
    emit(e);

    auto b = record("breakdown");
    b["tool"] = s.tool;
    b["tag_key"] = r.config.tag_key;
    b["partitions"] = ordered_json::object();
    for (const auto& [value, tally] : s.breakdown) b["partitions"][value] = tally_json(tally);
    emit(b);

    if (s.runtime) {
      auto rt = record("runtime");
      rt["tool"] = s.tool;
      rt["mean_ns"] = s.runtime->mean_ns;
      rt["median_ns"] = s.runtime->median_ns;
      rt["max_ns"] = s.runtime->max_ns;
      emit(rt);
    }
  }

  auto pw = record("pairwise");
  pw["tools"] = r.pairwise.tools;
  pw["counts"] = r.pairwise.counts;
  emit(pw);
  return out;
}

Report parse_report_jsonl(const std::string& text) {
  Report r;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  const auto summary_for = [&](const std::string& tool) -> ToolSummary& {
    for (auto& s : r.summaries) {
      if (s.tool == tool) return s;
    }
    r.summaries.push_back({});
    r.summaries.back().tool = tool;
    return r.summaries.back();
  };
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto j = ordered_json::parse(line);
      if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
        throw ReportError("unsupported report schema_version");
      }
      const auto kind = j.at("record").get<std::string>();
      if (kind == "header") {
        saw_header = true;
        r.corpus = j.at("corpus").get<std::string>();
        r.config.tools = j.at("tools").get<std::vector<std::string>>();
        const auto cmp = parse_compare_mode(j.at("compare").get<std::string>());
        if (!cmp) throw ReportError("unknown compare mode");
        r.config.compare = *cmp;
        r.config.fixup = j.at("fixup").get<std::string>();
        r.config.k_grid = j.at("k_grid").get<std::vector<double>>();
        r.config.tag_key = j.at("tag_key").get<std::string>();
        r.config.timed = j.at("timed").get<bool>();
        r.scenarios = j.at("scenarios").get<std::vector<std::string>>();
      } else if (kind == "cell") {
        Cell c;
        c.tool = j.at("tool").get<std::string>();
        c.scenario = j.at("scenario").get<std::string>();
        c.fixup = j.at("fixup").get<std::string>();
        const auto label = parse_label(j.at("label").get<std::string>());
        if (!label) throw ReportError("unknown label");
        c.outcome.label = *label;
        c.outcome.reclassified = j.at("reclassified").get<bool>();
        c.conflicts = j.at("conflicts").get<std::size_t>();
        for (const auto& fj : j.at("files")) {
          c.outcome.files.push_back({fj.at("path").get<std::string>(),
                                     fj.at("conflicts").get<std::size_t>(),
                                     fj.at("completed").get<bool>(),
                                     fj.at("matches").get<bool>()});
        }
        if (j.contains("elapsed_ns")) c.elapsed_ns = j["elapsed_ns"].get<double>();
        r.cells.push_back(std::move(c));
      } else if (kind == "tally") {
        summary_for(j.at("tool").get<std::string>()).tally = tally_from(j.at("tally"));
      } else if (kind == "er") {
        auto& s = summary_for(j.at("tool").get<std::string>());
        for (const auto& p : j.at("points")) {
          s.er.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }
      } else if (kind == "breakdown") {
        auto& s = summary_for(j.at("tool").get<std::string>());
        for (const auto& [value, tj] : j.at("partitions").items()) {
          s.breakdown[value] = tally_from(tj);
        }
      } else if (kind == "runtime") {
        auto& s = summary_for(j.at("tool").get<std::string>());
        s.runtime = RuntimeStats{j.at("mean_ns").get<double>(),
                                 j.at("median_ns").get<double>(),
                                 j.at("max_ns").get<double>()};
      } else if (kind == "pairwise") {
        r.pairwise.tools = j.at("tools").get<std::vector<std::string>>();
        r.pairwise.counts = j.at("counts").get<std::vector<std::vector<std::size_t>>>();
      } else {
        throw ReportError("unknown record type '" + kind + "'");
      }
    }
  } catch (const ordered_json::exception& e) {
    throw ReportError("report line " + std::to_string(lineno) + ": " + e.what());
  }
  if (!saw_header) throw ReportError("report has no header record");
  return r;
}

void write_report(const fs::path& dir, const Report& r) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ReportError("cannot create report directory " + dir.string());
  }
  write_text(dir / "report.jsonl", report_jsonl(r));

  const std::string v = std::to_string(kReportSchemaVersion);
  std::string cells = "schema_version,tool,scenario,fixup,label,reclassified,conflicts,elapsed_ns\n";
  for (const auto& c : r.cells) {
    cells += v + "," + csv_field(c.tool) + "," + csv_field(c.scenario) + "," +
             csv_field(c.fixup) + "," + std::string(to_string(c.outcome.label)) + "," +
             (c.outcome.reclassified ? "true" : "false") + "," +
             std::to_string(c.conflicts) + "," +
             (c.elapsed_ns ? number(*c.elapsed_ns) : std::string()) + "\n";
  }
  write_text(dir / "cells.csv", cells);

  std::string tallies = "schema_version,tool,partition,merges,correct,incorrect,unhandled\n";
  const auto tally_row = [&](const std::string& tool, const std::string& part,
                             const Tally& t) {
    tallies += v + "," + csv_field(tool) + "," + csv_field(part) + "," +
               std::to_string(t.num_merges) + "," + std::to_string(t.num_correct) +
               "," + std::to_string(t.num_incorrect) + "," +
               std::to_string(t.num_unhandled) + "\n";
  };
  for (const auto& s : r.summaries) {
    tally_row(s.tool, "all", s.tally);
    for (const auto& [value, t] : s.breakdown) {
      tally_row(s.tool, r.config.tag_key + "=" + value, t);
    }
  }
  write_text(dir / "tallies.csv", tallies);

  std::string curves = "schema_version,tool,k,effort_reduction\n";
  for (const auto& s : r.summaries) {
    for (const auto& p : s.er) {
      curves += v + "," + csv_field(s.tool) + "," + number(p.k) + "," + number(p.er) + "\n";
    }
  }
  write_text(dir / "er_curves.csv", curves);

  std::string pairwise = "schema_version,tool";
  for (const auto& t : r.pairwise.tools) pairwise += "," + csv_field(t);
  pairwise += "\n";
  for (std::size_t i = 0; i < r.pairwise.tools.size(); ++i) {
    pairwise += v + "," + csv_field(r.pairwise.tools[i]);
    for (auto n : r.pairwise.counts[i]) pairwise += "," + std::to_string(n);
    pairwise += "\n";
  }
  write_text(dir / "pairwise.csv", pairwise);
}

Report read_report(const fs::path& dir) {
  std::ifstream in(dir / "report.jsonl", std::ios::binary);
  if (!in) throw ReportError("cannot read " + (dir / "report.jsonl").string());
  return parse_report_jsonl(
      {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

}  // namespace trimerge
