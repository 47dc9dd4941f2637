#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "trimerge/corpus.hpp"
#include "trimerge/eval.hpp"

using namespace trimerge;

namespace {

Document doc(std::initializer_list<const char*> ls) {
  Document d;
  for (const char* l : ls) d.lines.push_back({l, Terminator::lf});
  return d;
}

Tally tally(std::size_t c, std::size_t i, std::size_t u) { return {c + i + u, c, i, u}; }

MergeScenario one_file(const Document& b, const Document& l, const Document& r,
                       const Document& expected) {
  MergeScenario s;
  s.id = "s";
  s.files.push_back({"f.txt", b, l, r});
  s.expected["f.txt"] = expected;
  return s;
}

ScenarioResult results_of(const MergeScenario& s, const std::string& tool) {
  ScenarioResult out;
  for (const auto& f : s.files) out[f.path] = merge_with(tool_spec(tool), f.base, f.left, f.right);
  return out;
}

const Cell& cell(const Report& r, const std::string& tool, const std::string& scenario) {
  for (const auto& c : r.cells) {
    if (c.tool == tool && c.scenario == scenario) return c;
  }
  throw std::logic_error("no cell " + tool + "/" + scenario);
}

}  // namespace

TEST_CASE("classify: clean results") {
  const Document b = doc({"a", "b"});
  const Document x = doc({"a", "c"});
  const auto id = fixup_by_name("identity");

  const auto right = one_file(b, b, x, x);
  const auto o = classify(right, results_of(right, "gitline"), id);
  CHECK(o.label == Label::correct);
  CHECK_FALSE(o.reclassified);
  REQUIRE(o.files.size() == 1);
  CHECK(o.files[0] == FileDetail{"f.txt", 0, true, true});

  const auto wrong = one_file(b, b, x, doc({"a", "d"}));
  CHECK(classify(wrong, results_of(wrong, "gitline"), id).label == Label::incorrect);
}

TEST_CASE("classify: compare modes") {
  const Document b = doc({"a"});
  const auto s = one_file(b, b, doc({"x  y"}), doc({"x y "}));
  const auto id = fixup_by_name("identity");
  CHECK(classify(s, results_of(s, "gitline"), id, CompareMode::exact).label ==
        Label::incorrect);
  CHECK(classify(s, results_of(s, "gitline"), id, CompareMode::ignore_space).label ==
        Label::correct);
}

TEST_CASE("classify: fixup reclassification") {
  const auto golden = golden_corpus();
  const MergeScenario* s = nullptr;
  for (const auto& x : golden.scenarios) {
    if (x.id == "reclassify-imports") s = &x;
  }
  REQUIRE(s);
  const auto results = results_of(*s, "gitline");
  const auto o = classify(*s, results, fixup_by_name("ivn"));
  CHECK(o.label == Label::incorrect);
  CHECK(o.reclassified);
  REQUIRE(o.files.size() == 2);
  CHECK(o.files[0] == FileDetail{"src/App.java", 1, true, true});
  CHECK(o.files[1] == FileDetail{"src/Calc.java", 0, true, false});

  // With no fixup the same results stay unhandled.
  const auto plain = classify(*s, results, fixup_by_name("identity"));
  CHECK(plain.label == Label::unhandled);
  CHECK_FALSE(plain.reclassified);
}

TEST_CASE("classify: a completed and correct fixup is still unhandled") {
  const auto s = one_file(doc({"v 1.0"}), doc({"v 1.1"}), doc({"v 1.2"}), doc({"v 1.2"}));
  const auto o = classify(s, results_of(s, "gitline"), fixup_by_name("ivn"));
  CHECK(o.label == Label::unhandled);
  CHECK(o.files[0].completed);
  CHECK(o.files[0].matches);
}

TEST_CASE("classify: unresolved conflict is unhandled, never correct") {
  const auto s = one_file(doc({"a"}), doc({"b"}), doc({"c"}), doc({"b"}));
  const auto o = classify(s, results_of(s, "gitline"), fixup_by_name("ivn"));
  CHECK(o.label == Label::unhandled);
  CHECK(o.files[0] == FileDetail{"f.txt", 1, false, false});
}

TEST_CASE("classify: missing result") {
  const auto s = one_file(doc({"a"}), doc({"a"}), doc({"a"}), doc({"a"}));
  CHECK_THROWS_AS(classify(s, {}, fixup_by_name("identity")), InputMismatch);
}

TEST_CASE("label and compare names") {
  for (auto l : {Label::correct, Label::incorrect, Label::unhandled}) {
    CHECK(parse_label(to_string(l)) == l);
  }
  CHECK_FALSE(parse_label("maybe"));
  CHECK(parse_compare_mode("ignore-space") == CompareMode::ignore_space);
  CHECK(parse_compare_mode("exact") == CompareMode::exact);
  CHECK_FALSE(parse_compare_mode("fuzzy"));
}

TEST_CASE("tally") {
  Tally t;
  t.add(Label::correct);
  t.add(Label::unhandled);
  t.add(Label::unhandled);
  CHECK(t == tally(1, 0, 2));
  t += tally(1, 2, 3);
  CHECK(t == tally(2, 2, 5));
}

TEST_CASE("effort_reduction") {
  CHECK(effort_reduction(tally(100, 0, 0), 1) == 1.0);
  CHECK(effort_reduction(tally(0, 0, 100), 1) == 0.0);
  const Tally t = tally(85, 5, 10);
  CHECK(std::abs(effort_reduction(t, 1) - 0.85) <= 1e-12);
  CHECK(std::abs(effort_reduction(t, 2) - 0.80) <= 1e-12);
  CHECK(std::abs(effort_reduction(t, 3) - 0.75) <= 1e-12);
  CHECK(effort_reduction(tally(0, 100, 0), 2) == -1.0);
  CHECK_THROWS_AS(effort_reduction(Tally{}, 1), UndefinedMetric);
  CHECK_THROWS_AS(effort_reduction(t, 0), std::invalid_argument);
  CHECK_THROWS_AS(effort_reduction(t, -1), std::invalid_argument);
  CHECK_THROWS_AS(effort_reduction(t, NAN), std::invalid_argument);
}

TEST_CASE("er_curve") {
  const auto c = er_curve(tally(85, 5, 10), {1, 2, 3});
  REQUIRE(c.size() == 3);
  CHECK(std::abs(c[0].er - 0.85) <= 1e-12);
  CHECK(std::abs(c[1].er - 0.80) <= 1e-12);
  CHECK(std::abs(c[2].er - 0.75) <= 1e-12);
  CHECK(er_curve(tally(1, 2, 3), {}).empty());
  const auto flat = er_curve(tally(50, 0, 50), default_k_grid());
  for (const auto& p : flat) CHECK(p.er == 0.5);
}

TEST_CASE("er_crossover") {
  // Tool A: fewer unhandled, more incorrect. ER_A(k) = 0.95 - 0.04k,
  // ER_B(k) = 0.80 - 0.01k; equal at k = 5.
  const Tally a = tally(91, 4, 5);
  const Tally b = tally(79, 1, 20);
  const auto k = er_crossover(a, b);
  REQUIRE(k);
  CHECK(std::abs(*k - 5.0) <= 1e-12);
  CHECK(std::abs(effort_reduction(a, *k) - effort_reduction(b, *k)) <= 1e-12);
  CHECK_FALSE(er_crossover(tally(1, 1, 1), tally(2, 1, 0)));
  CHECK_THROWS_AS(er_crossover(Tally{}, a), UndefinedMetric);
}

TEST_CASE("k grids") {
  const auto g = default_k_grid();
  REQUIRE(g.size() == 20);
  CHECK(g.front() == 0.25);
  CHECK(g.back() == 16.0);
  for (std::size_t i = 2; i < g.size(); ++i) {
    CHECK(std::abs(g[i] / g[i - 1] - g[1] / g[0]) <= 1e-12);
  }
  CHECK(parse_k_grid("1,2,3") == std::vector<double>{1, 2, 3});
  CHECK(parse_k_grid("1:1") == std::vector<double>{1});
  const auto three = parse_k_grid("1:4:3");
  REQUIRE(three.size() == 3);
  CHECK(three[0] == 1);
  CHECK(std::abs(three[1] - 2) <= 1e-12);
  CHECK(three[2] == 4);
  CHECK(parse_k_grid("0.25:16") == g);
  for (const char* bad : {"", "0", "-1", "1,,2", "a", "4:1", "1:4:1", "1:4:0", "1:2:3:4",
                          "inf"}) {
    CHECK_THROWS_AS(parse_k_grid(bad), std::invalid_argument);
  }
}

TEST_CASE("pairwise_distinct") {
  const Document b = doc({"a"});
  MergeResult x, y, conflicted;
  x.append(doc({"x"}).lines);
  y.append(doc({"y"}).lines);
  conflicted.append(Conflict{b.lines, doc({"l"}).lines, doc({"r"}).lines});

  ResultTable t;
  t["p"]["s1"]["f"] = x;
  t["q"]["s1"]["f"] = y;
  t["r"]["s1"]["f"] = conflicted;
  t["p"]["s2"]["f"] = x;
  t["q"]["s2"]["f"] = x;
  t["r"]["s2"]["f"] = y;
  const auto m = pairwise_distinct({"p", "q", "r"}, t);
  CHECK(m.tools == std::vector<std::string>{"p", "q", "r"});
  CHECK(m.counts == std::vector<std::vector<std::size_t>>{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});

  CHECK(pairwise_distinct({"p", "p"}, t).counts ==
        std::vector<std::vector<std::size_t>>{{0, 0}, {0, 0}});

  ResultTable bad = t;
  bad["q"].erase("s2");
  CHECK_THROWS_AS(pairwise_distinct({"p", "q"}, bad), InputMismatch);
  ResultTable renamed = t;
  renamed["q"]["s1"].clear();
  renamed["q"]["s1"]["g"] = y;
  CHECK_THROWS_AS(pairwise_distinct({"p", "q"}, renamed), InputMismatch);
  CHECK_THROWS_AS(pairwise_distinct({"p", "nosuch"}, t), InputMismatch);
}

TEST_CASE("pairwise: hires only adds clean merges, ivn pairs need both clean") {
  const auto golden = golden_corpus();
  EvalConfig cfg;
  cfg.tools = {"gitline", "hires", "ivn"};
  const auto r = evaluate("golden", golden.scenarios, cfg);
  CHECK(r.pairwise.counts[0][1] == 0);
  CHECK(r.pairwise.counts[0][2] == 0);

  std::vector<MergeScenario> only_imports;
  for (const auto& s : golden.scenarios) {
    if (s.id == "reclassify-imports") only_imports.push_back(s);
  }
  const auto ri = evaluate("imports", only_imports, cfg);
  CHECK(ri.pairwise.counts[0][2] == 0);
  CHECK(cell(ri, "ivn", "reclassify-imports").conflicts == 0);
}

TEST_CASE("runtime statistics") {
  CHECK(runtime_stats({7}) == RuntimeStats{7, 7, 7});
  CHECK(runtime_stats({1, 2, 9}) == RuntimeStats{4, 2, 9});
  CHECK(median_of({5, 1, 9}) == 5);
  CHECK(median_of({4, 1, 3, 2}) == 2.5);
  CHECK_THROWS_AS(runtime_stats({}), UndefinedMetric);
}

TEST_CASE("breakdown_by_tag") {
  const std::map<std::string, std::string> main{{"source", "main"}};
  const std::map<std::string, std::string> other{{"source", "other"}};
  const std::map<std::string, std::string> none;
  const std::vector<TaggedLabel> all_main = {{&main, Label::correct},
                                             {&main, Label::unhandled}};
  const auto one = breakdown_by_tag(all_main, "source");
  REQUIRE(one.size() == 1);
  CHECK(one.at("main") == tally(1, 0, 1));

  const std::vector<TaggedLabel> mixed = {
      {&main, Label::correct}, {&main, Label::correct}, {&main, Label::incorrect},
      {&other, Label::unhandled}, {&other, Label::correct}};
  const auto two = breakdown_by_tag(mixed, "source");
  CHECK(two.at("main").num_merges == 3);
  CHECK(two.at("other").num_merges == 2);

  const auto untagged = breakdown_by_tag({{&none, Label::correct}}, "source");
  CHECK(untagged.at(std::string(kUntagged)) == tally(1, 0, 0));
  CHECK(breakdown_by_tag({}, "source").empty());
}

TEST_CASE("effective_fixup") {
  CHECK(effective_fixup("gitline", "ivn") == "ivn");
  CHECK(effective_fixup("ivn", "ivn") == "identity");
  CHECK(effective_fixup("ivn-ignorespace", "ivn") == "identity");
  CHECK(effective_fixup("imports", "imports") == "identity");
  CHECK(effective_fixup("imports", "ivn") == "ivn");
}

TEST_CASE("evaluate the golden corpus") {
  const auto golden = golden_corpus();
  EvalConfig cfg;
  cfg.tools = tool_names();
  const auto r = evaluate(golden.name, golden.scenarios, cfg);
  CHECK(r.cells.size() == tool_names().size() * golden.scenarios.size());

  CHECK(cell(r, "hires", "3183-11").outcome.label == Label::correct);
  CHECK(cell(r, "hires", "25267-730").outcome.label == Label::incorrect);
  CHECK(cell(r, "ivn", "25267-730").outcome.label == Label::correct);
  CHECK(cell(r, "ivn", "25267-730").fixup == "identity");
  CHECK(cell(r, "gitline", "stale-call").outcome.label == Label::incorrect);
  CHECK(cell(r, "gitline", "rename-value").outcome.label == Label::unhandled);
  CHECK(cell(r, "adjacent", "1215-3280").outcome.label == Label::correct);
  CHECK(cell(r, "adjacent", "5184-31").outcome.label == Label::incorrect);
  CHECK(cell(r, "gitline-ignorespace", "2955-73").outcome.label == Label::correct);
  const auto& re = cell(r, "gitline", "reclassify-imports");
  CHECK(re.outcome.label == Label::incorrect);
  CHECK(re.outcome.reclassified);

  for (const auto& s : r.summaries) {
    CHECK(s.tally.num_merges == golden.scenarios.size());
    CHECK(s.er.size() == 20);
    Tally sum;
    for (const auto& [tag, t] : s.breakdown) sum += t;
    CHECK(sum == s.tally);
    CHECK_FALSE(s.runtime);
  }
  for (std::size_t i = 0; i < r.pairwise.tools.size(); ++i) {
    CHECK(r.pairwise.counts[i][i] == 0);
    for (std::size_t j = 0; j < i; ++j) {
      CHECK(r.pairwise.counts[i][j] == r.pairwise.counts[j][i]);
    }
  }
}

TEST_CASE("evaluate configuration handling") {
  const auto golden = golden_corpus();
  EvalConfig cfg;
  cfg.tools = {"gitline", "gitline"};
  const auto r = evaluate("g", golden.scenarios, cfg);
  CHECK(r.config.tools == std::vector<std::string>{"gitline"});
  CHECK(r.pairwise.counts == std::vector<std::vector<std::size_t>>{{0}});

  cfg.tools = {"gitline", "nosuch"};
  CHECK_THROWS_AS(evaluate("g", golden.scenarios, cfg), UnknownTool);
  cfg.tools = {"gitline"};
  cfg.fixup = "hires";
  CHECK_THROWS_AS(evaluate("g", golden.scenarios, cfg), UnknownTool);
  cfg.fixup = "ivn";
  cfg.k_grid = {1, 0};
  CHECK_THROWS_AS(evaluate("g", golden.scenarios, cfg), std::invalid_argument);

  cfg.k_grid = {1};
  const auto empty = evaluate("empty", {}, cfg);
  REQUIRE(empty.summaries.size() == 1);
  CHECK(empty.summaries[0].tally == Tally{});
  CHECK(empty.summaries[0].er.empty());
}

TEST_CASE("evaluate: timing and parallel workers") {
  const auto golden = golden_corpus();
  EvalConfig cfg;
  cfg.tools = {"gitline", "hires", "adjacent"};
  cfg.timed = true;
  const auto r = evaluate("g", golden.scenarios, cfg);
  for (const auto& c : r.cells) CHECK(c.elapsed_ns);
  for (const auto& s : r.summaries) {
    REQUIRE(s.runtime);
    CHECK(s.runtime->max_ns >= s.runtime->median_ns);
  }

  cfg.timed = false;
  cfg.jobs = 1;
  const auto serial = evaluate("g", golden.scenarios, cfg);
  cfg.jobs = 4;
  const auto parallel = evaluate("g", golden.scenarios, cfg);
  CHECK(serial == parallel);
}
