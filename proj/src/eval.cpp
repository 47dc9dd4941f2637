#include "trimerge/eval.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace trimerge {

std::string_view to_string(Label label) noexcept {
  switch (label) {
    case Label::correct:
      return "correct";
    case Label::incorrect:
      return "incorrect";
    case Label::unhandled:
      return "unhandled";
  }
  return "unhandled";
}

std::optional<Label> parse_label(std::string_view name) {
  if (name == "correct") return Label::correct;
  if (name == "incorrect") return Label::incorrect;
  if (name == "unhandled") return Label::unhandled;
  return std::nullopt;
}

std::string_view to_string(CompareMode mode) noexcept {
  return mode == CompareMode::exact ? "exact" : "ignore-space";
}

std::optional<CompareMode> parse_compare_mode(std::string_view name) {
  if (name == "exact") return CompareMode::exact;
  if (name == "ignore-space") return CompareMode::ignore_space;
  return std::nullopt;
}

bool documents_match(const Document& a, const Document& b, CompareMode mode) {
  const auto ws = mode == CompareMode::exact ? WhitespaceMode::exact
                                             : WhitespaceMode::ignore_space_change;
  return ranges_equal(a.lines.data(), a.lines.size(), b.lines.data(),
                      b.lines.size(), ws);
}

Outcome classify(const MergeScenario& scenario, const ScenarioResult& results,
                 const Fixup& fixup, CompareMode compare) {
  Outcome out;
  bool any_conflict = false;
  bool all_completed = true;
  bool all_match = true;
  for (const auto& file : scenario.files) {
    const auto it = results.find(file.path);
    if (it == results.end()) {
      throw InputMismatch("scenario " + scenario.id + ": no result for " + file.path);
    }
    const MergeResult& produced = it->second;
    FileDetail detail{file.path, produced.conflict_count(), false, false};
    MergeResult completed;
    if (produced.clean()) {
      completed = produced;
    } else {
      any_conflict = true;
      completed = fixup(produced, file.base, file.left, file.right);
    }
    detail.completed = completed.clean();
    if (detail.completed) {
      const auto exp = scenario.expected.find(file.path);
      detail.matches = exp != scenario.expected.end() &&
                       documents_match(Document{completed.merged_lines()},
                                       exp->second, compare);
    }
    all_completed = all_completed && detail.completed;
    all_match = all_match && detail.matches;
    out.files.push_back(std::move(detail));
  }
  if (!any_conflict) {
    out.label = all_match ? Label::correct : Label::incorrect;
  } else if (all_completed && !all_match) {
    out.label = Label::incorrect;
    out.reclassified = true;
  } else {
    out.label = Label::unhandled;
  }
  return out;
}

void Tally::add(Label label) {
  ++num_merges;
  switch (label) {
    case Label::correct:
      ++num_correct;
      break;
    case Label::incorrect:
      ++num_incorrect;
      break;
    case Label::unhandled:
      ++num_unhandled;
      break;
  }
}

Tally& Tally::operator+=(const Tally& other) {
  num_merges += other.num_merges;
  num_correct += other.num_correct;
  num_incorrect += other.num_incorrect;
  num_unhandled += other.num_unhandled;
  return *this;
}

double effort_reduction(const Tally& t, double k) {
  if (t.num_merges == 0) throw UndefinedMetric("effort reduction of zero merges");
  if (!(k > 0) || !std::isfinite(k)) {
    throw std::invalid_argument("cost factor k must be positive");
  }
  const double cost = static_cast<double>(t.num_unhandled) +
                      static_cast<double>(t.num_incorrect) * k;
  return 1.0 - cost / static_cast<double>(t.num_merges);
}

std::vector<ErPoint> er_curve(const Tally& t, const std::vector<double>& k_grid) {
  std::vector<ErPoint> out;
  out.reserve(k_grid.size());
  for (double k : k_grid) out.push_back({k, effort_reduction(t, k)});
  return out;
}

std::optional<double> er_crossover(const Tally& a, const Tally& b) {
  if (a.num_merges == 0 || b.num_merges == 0) {
    throw UndefinedMetric("effort reduction of zero merges");
  }
  const double na = static_cast<double>(a.num_merges);
  const double nb = static_cast<double>(b.num_merges);
  const double slope = static_cast<double>(a.num_incorrect) / na -
                       static_cast<double>(b.num_incorrect) / nb;
  if (slope == 0) return std::nullopt;
  return (static_cast<double>(b.num_unhandled) / nb -
          static_cast<double>(a.num_unhandled) / na) /
         slope;
}

namespace {

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (lo == hi) return {lo};
  std::vector<double> out(n);
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo * std::exp(ratio * static_cast<double>(i) /
                           static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

double parse_positive(std::string_view text) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !(value > 0) ||
      !std::isfinite(value)) {
    throw std::invalid_argument("bad k value '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    parts.push_back(s.substr(start, at == std::string_view::npos ? at : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

}  // namespace

std::vector<double> default_k_grid() { return log_spaced(0.25, 16.0, 20); }

std::vector<double> parse_k_grid(std::string_view spec) {
  if (spec.find(':') != std::string_view::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() > 3) throw std::invalid_argument("k grid: too many ':' fields");
    const double lo = parse_positive(parts[0]);
    const double hi = parse_positive(parts[1]);
    if (hi < lo) throw std::invalid_argument("k grid: upper bound below lower bound");
    std::size_t n = 20;
    if (parts.size() == 3) {
      const auto [ptr, ec] =
          std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
      if (ec != std::errc{} || ptr != parts[2].data() + parts[2].size() || n == 0) {
        throw std::invalid_argument("k grid: bad point count");
      }
    }
    if (lo < hi && n < 2) throw std::invalid_argument("k grid: a range needs 2+ points");
    return log_spaced(lo, hi, n);
  }
  std::vector<double> out;
  for (auto part : split(spec, ',')) out.push_back(parse_positive(part));
  return out;
}

PairwiseMatrix pairwise_distinct(const std::vector<std::string>& tools,
                                 const ResultTable& results, CompareMode compare) {
  std::vector<const std::map<std::string, ScenarioResult>*> rows;
  for (const auto& tool : tools) {
    const auto it = results.find(tool);
    if (it == results.end()) throw InputMismatch("no results for tool " + tool);
    rows.push_back(&it->second);
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = *rows.front();
    const auto& b = *rows[i];
    const bool same_keys = a.size() == b.size() &&
                           std::equal(a.begin(), a.end(), b.begin(),
                                      [](const auto& x, const auto& y) {
                                        if (x.first != y.first) return false;
                                        if (x.second.size() != y.second.size()) return false;
                                        return std::equal(
                                            x.second.begin(), x.second.end(),
                                            y.second.begin(),
                                            [](const auto& p, const auto& q) {
                                              return p.first == q.first;
                                            });
                                      });
    if (!same_keys) {
      throw InputMismatch("tools " + tools.front() + " and " + tools[i] +
                          " were run on different scenarios");
    }
  }

  const auto all_clean = [](const ScenarioResult& r) {
    return std::all_of(r.begin(), r.end(),
                       [](const auto& f) { return f.second.clean(); });
  };
  const auto differ = [&](const ScenarioResult& x, const ScenarioResult& y) {
    for (auto ix = x.begin(), iy = y.begin(); ix != x.end(); ++ix, ++iy) {
      if (!documents_match(Document{ix->second.merged_lines()},
                           Document{iy->second.merged_lines()}, compare)) {
        return true;
      }
    }
    return false;
  };

  PairwiseMatrix m;
  m.tools = tools;
  m.counts.assign(tools.size(), std::vector<std::size_t>(tools.size(), 0));
  for (std::size_t i = 0; i < tools.size(); ++i) {
    for (std::size_t j = i + 1; j < tools.size(); ++j) {
      std::size_t count = 0;
      for (auto a = rows[i]->begin(), b = rows[j]->begin(); a != rows[i]->end();
           ++a, ++b) {
        if (all_clean(a->second) && all_clean(b->second) &&
            differ(a->second, b->second)) {
          ++count;
        }
      }
      m.counts[i][j] = m.counts[j][i] = count;
    }
  }
  return m;
}

double median_of(std::vector<double> samples) {
  if (samples.empty()) throw UndefinedMetric("median of no samples");
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  if (samples.size() % 2 == 1) return samples[mid];
  return (samples[mid - 1] + samples[mid]) / 2;
}

RuntimeStats runtime_stats(const std::vector<double>& samples_ns) {
  if (samples_ns.empty()) throw UndefinedMetric("run-time statistics of no samples");
  RuntimeStats s;
  double sum = 0;
  for (double x : samples_ns) sum += x;
  s.mean_ns = sum / static_cast<double>(samples_ns.size());
  s.median_ns = median_of(samples_ns);
  s.max_ns = *std::max_element(samples_ns.begin(), samples_ns.end());
  return s;
}

std::map<std::string, Tally> breakdown_by_tag(const std::vector<TaggedLabel>& items,
                                              const std::string& tag_key) {
  std::map<std::string, Tally> out;
  for (const auto& item : items) {
    std::string value(kUntagged);
    if (item.tags) {
      const auto it = item.tags->find(tag_key);
      if (it != item.tags->end()) value = it->second;
    }
    out[value].add(item.label);
  }
  return out;
}

std::string effective_fixup(const std::string& tool, const std::string& fixup) {
  const std::string base_tool = tool.substr(0, tool.find("-ignorespace"));
  if (base_tool == fixup) return "identity";
  return fixup;
}

namespace {

struct CellWork {
  Cell cell;
  ScenarioResult results;
};

CellWork run_cell(const std::string& tool, const MergeScenario& scenario,
                  const EvalConfig& config) {
  const ToolSpec spec = tool_spec(tool);
  CellWork work;
  work.cell.tool = tool;
  work.cell.scenario = scenario.id;
  work.cell.fixup = effective_fixup(tool, config.fixup);
  const int runs = config.timed ? 3 : 1;
  std::vector<double> totals;
  for (int run = 0; run < runs; ++run) {
    double total = 0;
    for (const auto& file : scenario.files) {
      ToolRun r = run_tool(spec, file.base, file.left, file.right);
      total += static_cast<double>(r.elapsed.count());
      work.results[file.path] = std::move(r.result);
    }
    totals.push_back(total);
  }
  if (config.timed) work.cell.elapsed_ns = median_of(totals);
  for (const auto& [path, result] : work.results) {
    work.cell.conflicts += result.conflict_count();
  }
  work.cell.outcome = classify(scenario, work.results,
                               fixup_by_name(work.cell.fixup), config.compare);
  return work;
}

}  // namespace

Report evaluate(const std::string& corpus_name,
                const std::vector<MergeScenario>& scenarios, EvalConfig config) {
  std::vector<std::string> tools;
  for (const auto& t : config.tools) {
    tool_spec(t);
    if (std::find(tools.begin(), tools.end(), t) == tools.end()) tools.push_back(t);
  }
  config.tools = tools;
  fixup_by_name(config.fixup);
  for (double k : config.k_grid) {
    if (!(k > 0) || !std::isfinite(k)) {
      throw std::invalid_argument("cost factor k must be positive");
    }
  }

  const std::size_t n_scen = scenarios.size();
  const std::size_t n_cells = tools.size() * n_scen;
  std::vector<CellWork> work(n_cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < n_cells; i = next++) {
      try {
        work[i] = run_cell(tools[i / n_scen], scenarios[i % n_scen], config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads =
      std::max<std::size_t>(1, std::min(config.jobs, n_cells));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  Report report;
  report.corpus = corpus_name;
  report.config = config;
  report.config.jobs = 1;  // not part of the echo; results do not depend on it
  for (const auto& s : scenarios) report.scenarios.push_back(s.id);

  ResultTable table;
  for (std::size_t t = 0; t < tools.size(); ++t) {
    ToolSummary summary;
    summary.tool = tools[t];
    std::vector<TaggedLabel> tagged;
    std::vector<double> times;
    auto& row = table[tools[t]];
    for (std::size_t s = 0; s < n_scen; ++s) {
      CellWork& w = work[t * n_scen + s];
      summary.tally.add(w.cell.outcome.label);
      tagged.push_back({&scenarios[s].tags, w.cell.outcome.label});
      if (w.cell.elapsed_ns) times.push_back(*w.cell.elapsed_ns);
      row[scenarios[s].id] = std::move(w.results);
      report.cells.push_back(std::move(w.cell));
    }
    if (summary.tally.num_merges > 0) {
      summary.er = er_curve(summary.tally, config.k_grid);
    }
    summary.breakdown = breakdown_by_tag(tagged, config.tag_key);
    if (!times.empty()) summary.runtime = runtime_stats(times);
    report.summaries.push_back(std::move(summary));
  }
  report.pairwise = pairwise_distinct(tools, table, config.compare);
  return report;
}

}  // namespace trimerge
