#include "trimerge/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "trimerge/corpus.hpp"
#include "trimerge/eval.hpp"
#include "trimerge/merge.hpp"
#include "trimerge/strategies.hpp"

namespace trimerge {
namespace {

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw CliError("cannot write " + path);
}

std::size_t marker_size(int flag) {
  if (flag > 0) return static_cast<std::size_t>(flag);
  if (const char* env = std::getenv("TRIMERGE_MARKER_SIZE"); env && *env) {
    std::size_t n = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw CliError("TRIMERGE_MARKER_SIZE must be a positive integer");
    }
    return n;
  }
  return kMinMarkerSize;
}

/// Style and labels as found in an existing conflicted file.
ConflictStyle detect_style(const Document& doc, std::size_t n) {
  ConflictStyle style;
  style.marker_size = n;
  style.kind = ConflictStyleKind::merge;
  bool labels_seen = false;
  for (const auto& line : doc.lines) {
    const std::string& c = line.content;
    if (c.size() < n) continue;
    const char m = c[0];
    if (m != '<' && m != '|' && m != '>') continue;
    if (c.find_first_not_of(m) < n) continue;
    if (c.size() > n && c[n] != ' ') continue;
    const std::string label = c.size() > n ? c.substr(n + 1) : std::string();
    if (m == '|') style.kind = ConflictStyleKind::diff3;
    if (labels_seen) continue;
    if (m == '<') style.left_label = label;
    if (m == '|') style.base_label = label;
    if (m == '>') {
      style.right_label = label;
      labels_seen = true;
    }
  }
  return style;
}

int exit_for(const MergeResult& result, const std::string& rendered, std::size_t n) {
  return result.clean() && !has_conflict_markers(rendered, n) ? kExitClean
                                                               : kExitConflicts;
}

struct MergeArgs {
  std::string base, left, right;
  std::string tool = "gitline";
  std::string out;
  std::string style = "diff3";
  bool ignore_space = false;
  std::vector<std::string> labels;
  int marker_size = 0;
};

int cmd_merge(const MergeArgs& a, std::ostream& out) {
  ToolSpec spec = tool_spec(a.tool);
  if (a.ignore_space) spec.ws = WhitespaceMode::ignore_space_change;
  ConflictStyle style;
  style.kind = *parse_conflict_style(a.style);
  style.marker_size = marker_size(a.marker_size);
  if (!a.labels.empty()) {
    style.left_label = a.labels[0];
    style.base_label = a.labels[1];
    style.right_label = a.labels[2];
  }
  style.validate();
  const Document base = split_lines(read_file(a.base));
  const Document left = split_lines(read_file(a.left));
  const Document right = split_lines(read_file(a.right));
  const MergeResult result = merge_with(spec, base, left, right);
  const std::string text = render(result, style);
  if (a.out == "-") {
    out << text;
  } else {
    write_file(a.out.empty() ? a.left : a.out, text);
  }
  return exit_for(result, text, style.marker_size);
}

struct FixupArgs {
  std::string file;
  std::string tool = "ivn";
  std::string base, left, right;
  std::string out;
  int marker_size = 0;
};

int cmd_fixup(const FixupArgs& a, std::ostream& out) {
  const Fixup fixup = fixup_by_name(a.tool);
  const std::size_t n = marker_size(a.marker_size);
  const std::string text = read_file(a.file);
  const Document doc = split_lines(text);
  ConflictStyle style = detect_style(doc, n);
  style.validate();
  const MergeResult parsed = parse_conflicts(text, style);
  const Document base = a.base.empty() ? side_view(parsed, Side::base)
                                       : split_lines(read_file(a.base));
  const Document left = a.left.empty() ? side_view(parsed, Side::left)
                                       : split_lines(read_file(a.left));
  const Document right = a.right.empty() ? side_view(parsed, Side::right)
                                         : split_lines(read_file(a.right));
  const MergeResult fixed = fixup(parsed, base, left, right);
  const std::string rendered = render(fixed, style);
  if (a.out == "-") {
    out << rendered;
  } else {
    write_file(a.out.empty() ? a.file : a.out, rendered);
  }
  return exit_for(fixed, rendered, n);
}

struct EvalArgs {
  std::string corpus;
  bool golden = false;
  std::string tools = "all";
  std::string k_grid;
  std::string compare = "exact";
  std::string fixup = "ivn";
  std::string tag_key = "source";
  std::size_t jobs = 1;
  std::string report = "eval-report";
  bool timed = false;
};

std::vector<std::string> parse_tool_list(const std::string& list) {
  if (list == "all") return tool_names();
  std::vector<std::string> tools;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    tool_spec(name);
    tools.push_back(name);
  }
  if (tools.empty()) throw CliError("--tools names no tools");
  return tools;
}

void print_summary(const Report& r, std::ostream& out) {
  std::size_t width = 4;
  for (const auto& s : r.summaries) width = std::max(width, s.tool.size());
  out << "corpus " << r.corpus << ": " << r.scenarios.size()
      << " scenarios, fixup " << r.config.fixup << ", compare "
      << to_string(r.config.compare) << "\n";
  out << std::left << std::setw(static_cast<int>(width)) << "tool" << std::right
      << std::setw(8) << "merges" << std::setw(9) << "correct" << std::setw(11)
      << "incorrect" << std::setw(11) << "unhandled" << std::setw(10) << "ER(k=1)"
      << "\n";
  for (const auto& s : r.summaries) {
    std::ostringstream er;
    if (s.tally.num_merges > 0) {
      er << std::fixed << std::setprecision(3) << effort_reduction(s.tally, 1.0);
    } else {
      er << "-";
    }
    out << std::left << std::setw(static_cast<int>(width)) << s.tool << std::right
        << std::setw(8) << s.tally.num_merges << std::setw(9) << s.tally.num_correct
        << std::setw(11) << s.tally.num_incorrect << std::setw(11)
        << s.tally.num_unhandled << std::setw(10) << er.str() << "\n";
  }
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  if (a.golden == !a.corpus.empty()) {
    throw CliError("give exactly one of --corpus DIR or --golden");
  }
  EvalConfig config;
  config.tools = parse_tool_list(a.tools);
  const auto compare = parse_compare_mode(a.compare);
  if (!compare) throw CliError("--compare must be exact or ignore-space");
  config.compare = *compare;
  fixup_by_name(a.fixup);
  config.fixup = a.fixup;
  if (!a.k_grid.empty()) config.k_grid = parse_k_grid(a.k_grid);
  config.tag_key = a.tag_key;
  config.jobs = std::max<std::size_t>(1, a.jobs);
  config.timed = a.timed;
  const Corpus corpus = a.golden ? golden_corpus() : load_corpus(a.corpus);
  if (corpus.scenarios.empty()) throw CliError("corpus has no scenarios");
  const Report report = evaluate(corpus.name, corpus.scenarios, config);
  write_report(a.report, report);
  print_summary(report, out);
  out << "report written to " << a.report << "\n";
  return kExitClean;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Three-way merge tools and merge-evaluation harness"};
  app.name("trimerge");
  app.require_subcommand(1);

  MergeArgs m;
  auto* merge = app.add_subcommand("merge", "Merge three versions of one file");
  merge->add_option("base", m.base, "Common ancestor")->required();
  merge->add_option("left", m.left, "Current version; rewritten unless --out is given")
      ->required();
  merge->add_option("right", m.right, "Other version")->required();
  merge->add_option("--tool", m.tool, "Merge tool")->capture_default_str();
  merge->add_option("-o,--out", m.out, "Output path, or - for stdout");
  merge->add_option("--conflict-style", m.style, "merge, diff3 or zdiff3")
      ->check(CLI::IsMember({"merge", "diff3", "zdiff3"}))
      ->capture_default_str();
  merge->add_flag("--ignore-space-change", m.ignore_space,
                  "Treat runs of whitespace as equal");
  merge->add_option("--labels", m.labels, "Marker labels for left, base, right")
      ->expected(3);
  merge->add_option("--marker-size", m.marker_size, "Conflict marker length")
      ->check(CLI::PositiveNumber);

  FixupArgs f;
  auto* fix = app.add_subcommand("fixup", "Resolve remaining conflicts in a file");
  fix->add_option("file", f.file, "File containing conflict markers")->required();
  fix->add_option("--tool", f.tool, "imports, version-numbers or ivn")
      ->check(CLI::IsMember({"imports", "version-numbers", "ivn"}))
      ->capture_default_str();
  fix->add_option("--base", f.base, "Base version, for context");
  fix->add_option("--left", f.left, "Left version, for context");
  fix->add_option("--right", f.right, "Right version, for context");
  fix->add_option("-o,--out", f.out, "Output path, or - for stdout");
  fix->add_option("--marker-size", f.marker_size, "Conflict marker length")
      ->check(CLI::PositiveNumber);

  EvalArgs e;
  auto* ev = app.add_subcommand("eval", "Evaluate merge tools over a corpus");
  ev->add_option("--corpus", e.corpus, "Corpus directory with manifest.json");
  ev->add_flag("--golden", e.golden, "Use the built-in corpus");
  ev->add_option("--tools", e.tools, "Comma-separated tool names, or all")
      ->capture_default_str();
  ev->add_option("--k-grid", e.k_grid, "k values: a,b,c or lo:hi[:n]");
  ev->add_option("--compare", e.compare, "exact or ignore-space")
      ->check(CLI::IsMember({"exact", "ignore-space"}))
      ->capture_default_str();
  ev->add_option("--fixup", e.fixup, "identity, imports, version-numbers or ivn")
      ->capture_default_str();
  ev->add_option("--tag-key", e.tag_key, "Tag used for the breakdown")
      ->capture_default_str();
  ev->add_option("-j,--jobs", e.jobs, "Worker threads")->check(CLI::PositiveNumber);
  ev->add_option("--report", e.report, "Report directory")->capture_default_str();
  ev->add_flag("--time", e.timed, "Record the median of 3 runs per cell");

  std::string export_dir;
  auto* exp = app.add_subcommand("export-golden", "Write the built-in corpus to disk");
  exp->add_option("dir", export_dir, "Destination directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitClean : kExitError;
  }

  try {
    if (merge->parsed()) return cmd_merge(m, out);
    if (fix->parsed()) return cmd_fixup(f, out);
    if (ev->parsed()) return cmd_eval(e, out);
    if (exp->parsed()) {
      write_corpus(export_dir, golden_corpus());
      return kExitClean;
    }
  } catch (const UnknownTool& ex) {
    err << "trimerge: " << ex.what() << "\n";
    return kExitError;
  } catch (const MalformedConflict& ex) {
    err << "trimerge: malformed conflict markers at " << ex.what() << "\n";
    return kExitError;
  } catch (const std::exception& ex) {
    err << "trimerge: " << ex.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace trimerge
