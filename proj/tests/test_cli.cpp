#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "trimerge/cli.hpp"
#include "trimerge/corpus.hpp"

using namespace trimerge;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("trimerge-cli-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void put(const std::string& p, const std::string& text) {
  fs::create_directories(fs::path(p).parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const MergeScenario& golden(const std::string& id) {
  static const Corpus c = golden_corpus();
  for (const auto& s : c.scenarios) {
    if (s.id == id) return s;
  }
  throw std::logic_error("no golden scenario " + id);
}

/// Writes base/left/right of the scenario's first file into `dir`.
void write_triple(const TempDir& dir, const std::string& id) {
  const auto& f = golden(id).files.front();
  put(dir / "base", f.base.text());
  put(dir / "left", f.left.text());
  put(dir / "right", f.right.text());
}

}  // namespace

TEST_CASE("merge: clean but wrong merge exits 0") {
  TempDir d;
  write_triple(d, "stale-call");
  const auto r = cli({"merge", d / "base", d / "left", d / "right", "--tool", "gitline",
                      "-o", d / "out"});
  CHECK(r.code == kExitClean);
  CHECK(slurp(d / "out") ==
        "def multiply(a,b):\n    return a*b\ndef main():\n    a = mult(3,5)\n    print(a)\n");
}

TEST_CASE("merge: conflict exits 1 with diff3 fences") {
  TempDir d;
  write_triple(d, "rename-value");
  const auto r = cli({"merge", d / "base", d / "left", d / "right", "-o", "-"});
  CHECK(r.code == kExitConflicts);
  CHECK(r.out ==
        "def main():\n<<<<<<< LEFT\n    n_people = 128\n    print(n_people)\n"
        "||||||| BASE\n    n = 128\n    print(n)\n=======\n    n = 64\n    print(n)\n"
        ">>>>>>> RIGHT\n");
}

TEST_CASE("merge: hires resolves the same triple") {
  TempDir d;
  write_triple(d, "rename-value");
  const auto r = cli({"merge", d / "base", d / "left", d / "right", "--tool", "hires"});
  CHECK(r.code == kExitClean);
  // No --out: the left file is rewritten in place.
  CHECK(slurp(d / "left") == golden("rename-value").expected.at("main.py").text());
}

TEST_CASE("merge: styles, labels and marker size") {
  TempDir d;
  write_triple(d, "rename-value");
  const auto merged = cli({"merge", d / "base", d / "left", d / "right", "-o", "-",
                           "--conflict-style", "merge", "--labels", "ours", "base", "theirs"});
  CHECK(merged.code == kExitConflicts);
  CHECK(merged.out.find("<<<<<<< ours\n") != std::string::npos);
  CHECK(merged.out.find(">>>>>>> theirs\n") != std::string::npos);
  CHECK(merged.out.find("|||||||") == std::string::npos);

  const auto z = cli({"merge", d / "base", d / "left", d / "right", "-o", "-",
                      "--conflict-style", "zdiff3", "--marker-size", "9"});
  CHECK(z.code == kExitConflicts);
  CHECK(z.out.find("<<<<<<<<< LEFT\n") != std::string::npos);

  CHECK(cli({"merge", d / "base", d / "left", d / "right", "-o", "-", "--conflict-style",
             "diff4"}).code == kExitError);
  CHECK(cli({"merge", d / "base", d / "left", d / "right", "-o", "-", "--marker-size", "3"})
            .code == kExitError);
}

TEST_CASE("merge: marker size from the environment") {
  TempDir d;
  write_triple(d, "rename-value");
  ::setenv("TRIMERGE_MARKER_SIZE", "10", 1);
  const auto r = cli({"merge", d / "base", d / "left", d / "right", "-o", "-"});
  const auto flag = cli({"merge", d / "base", d / "left", d / "right", "-o", "-",
                         "--marker-size", "8"});
  ::setenv("TRIMERGE_MARKER_SIZE", "lots", 1);
  const auto bad = cli({"merge", d / "base", d / "left", d / "right", "-o", "-"});
  ::unsetenv("TRIMERGE_MARKER_SIZE");
  CHECK(r.code == kExitConflicts);
  CHECK(r.out.find("<<<<<<<<<< LEFT\n") != std::string::npos);
  CHECK(flag.out.find("<<<<<<<< LEFT\n") != std::string::npos);
  CHECK(flag.out.find("<<<<<<<<< LEFT\n") == std::string::npos);
  CHECK(bad.code == kExitError);
}

TEST_CASE("merge: ignore-space-change") {
  TempDir d;
  write_triple(d, "2955-73");
  CHECK(cli({"merge", d / "base", d / "left", d / "right", "-o", "-"}).code ==
        kExitConflicts);
  const auto r = cli({"merge", d / "base", d / "left", d / "right", "-o", "-",
                      "--ignore-space-change"});
  CHECK(r.code == kExitClean);
  CHECK(r.out == " * </p>\n");
}

TEST_CASE("merge: a clean result that contains marker lines exits 1") {
  TempDir d;
  put(d / "base", "a\n");
  put(d / "left", "a\n");
  put(d / "right", "<<<<<<< not really\n");
  const auto r = cli({"merge", d / "base", d / "left", d / "right", "-o", "-"});
  CHECK(r.out == "<<<<<<< not really\n");
  CHECK(r.code == kExitConflicts);
}

TEST_CASE("merge: errors exit 2") {
  TempDir d;
  write_triple(d, "stale-call");
  const auto unknown = cli({"merge", d / "base", d / "left", d / "right", "--tool", "nosuch"});
  CHECK(unknown.code == kExitError);
  CHECK(unknown.err.find("gitline") != std::string::npos);
  CHECK(unknown.err.find("ivn-ignorespace") != std::string::npos);
  CHECK(cli({"merge", d / "missing", d / "left", d / "right"}).code == kExitError);
  CHECK(cli({"merge", d / "base"}).code == kExitError);
  CHECK(cli({}).code == kExitError);
  CHECK(cli({"frobnicate"}).code == kExitError);
  CHECK(cli({"--help"}).code == kExitClean);
}

TEST_CASE("fixup: version fence is replaced") {
  TempDir d;
  put(d / "pom.xml",
      "<project>\n<<<<<<< LEFT\n<version>23.7.0</version>\n||||||| BASE\n"
      "<version>23.6.0</version>\n=======\n<version>23.6.1</version>\n>>>>>>> RIGHT\n"
      "</project>\n");
  const auto r = cli({"fixup", d / "pom.xml"});
  CHECK(r.code == kExitClean);
  CHECK(slurp(d / "pom.xml") == "<project>\n<version>23.7.0</version>\n</project>\n");
}

TEST_CASE("fixup: unrelated fence stays, exit 1") {
  TempDir d;
  const std::string text =
      "x\n<<<<<<< ours\nint a = 1;\n||||||| base\nint a = 0;\n=======\nint a = 2;\n"
      ">>>>>>> theirs\ny\n";
  put(d / "A.java", text);
  const auto r = cli({"fixup", d / "A.java", "--tool", "version-numbers"});
  CHECK(r.code == kExitConflicts);
  CHECK(slurp(d / "A.java") == text);
}

TEST_CASE("fixup: merge-style fences keep their style") {
  TempDir d;
  const std::string text = "<<<<<<< a\nint a = 1;\n=======\nint a = 2;\n>>>>>>> b\n";
  put(d / "A.java", text);
  const auto r = cli({"fixup", d / "A.java", "-o", "-"});
  CHECK(r.code == kExitConflicts);
  CHECK(r.out == text);
}

TEST_CASE("fixup: no fences is a fixpoint") {
  TempDir d;
  put(d / "A.java", "class A {}\n");
  const auto r = cli({"fixup", d / "A.java", "--tool", "imports"});
  CHECK(r.code == kExitClean);
  CHECK(slurp(d / "A.java") == "class A {}\n");
}

TEST_CASE("fixup: malformed fences exit 2 with a location") {
  TempDir d;
  put(d / "A.java", "a\nb\n<<<<<<< LEFT\nx\n");
  const auto r = cli({"fixup", d / "A.java"});
  CHECK(r.code == kExitError);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(cli({"fixup", d / "A.java", "--tool", "hires"}).code == kExitError);
  CHECK(cli({"fixup", d / "nothing"}).code == kExitError);
}

TEST_CASE("merge then fixup equals the ivn merge") {
  const Corpus c = golden_corpus();
  for (const auto& s : c.scenarios) {
    for (const auto& f : s.files) {
      CAPTURE(s.id);
      CAPTURE(f.path);
      TempDir d;
      put(d / "base", f.base.text());
      put(d / "left", f.left.text());
      put(d / "right", f.right.text());
      const auto direct =
          cli({"merge", d / "base", d / "left", d / "right", "--tool", "ivn", "-o", d / "ivn"});
      const auto line = cli({"merge", d / "base", d / "left", d / "right", "-o", d / "two"});
      put(d / "plain", slurp(d / "two"));
      const auto fixed = cli({"fixup", d / "two", "--tool", "ivn", "--base", d / "base",
                              "--left", d / "left", "--right", d / "right"});
      CHECK(slurp(d / "two") == slurp(d / "ivn"));
      CHECK(fixed.code == direct.code);
      // Without the original versions the fixup sees the fenced sides only.
      const auto bare = cli({"fixup", d / "plain", "--tool", "ivn"});
      CHECK(slurp(d / "plain") == slurp(d / "ivn"));
      CHECK(bare.code == direct.code);
      CHECK(line.code != kExitError);
    }
  }
}

TEST_CASE("eval over the built-in corpus") {
  TempDir d;
  const auto r = cli({"eval", "--golden", "--tools", "all", "--report", d / "rep"});
  REQUIRE(r.code == kExitClean);
  CHECK(r.out.find("corpus golden: 10 scenarios") != std::string::npos);
  const auto rep = read_report(d.path() / "rep");
  const auto label = [&](const std::string& tool, const std::string& id) {
    for (const auto& c : rep.cells) {
      if (c.tool == tool && c.scenario == id) return c.outcome.label;
    }
    throw std::logic_error("missing cell");
  };
  CHECK(label("hires", "3183-11") == Label::correct);
  CHECK(label("hires", "25267-730") == Label::incorrect);
  CHECK(label("ivn", "25267-730") == Label::correct);
  CHECK(rep.summaries.size() == tool_names().size());
}

TEST_CASE("eval: flat ER curve and self comparison") {
  TempDir d;
  REQUIRE(cli({"eval", "--golden", "--tools", "gitline,gitline", "--k-grid", "1:1",
               "--report", d / "rep"}).code == kExitClean);
  const auto rep = read_report(d.path() / "rep");
  REQUIRE(rep.summaries.size() == 1);
  CHECK(rep.summaries[0].er.size() == 1);
  CHECK(rep.pairwise.counts == std::vector<std::vector<std::size_t>>{{0}});

  REQUIRE(cli({"eval", "--golden", "--tools", "gitline-ignorespace,hires", "--k-grid",
               "1,2,4", "--report", d / "flat"}).code == kExitClean);
  for (const auto& s : read_report(d.path() / "flat").summaries) {
    CHECK(s.er.size() == 3);
    if (s.tally.num_incorrect == 0) {
      CHECK(s.er[0].er == s.er[2].er);
    }
  }
}

TEST_CASE("eval: --jobs does not change the report files") {
  TempDir d;
  REQUIRE(cli({"eval", "--golden", "-j", "1", "--report", d / "one"}).code == kExitClean);
  REQUIRE(cli({"eval", "--golden", "-j", "4", "--report", d / "four"}).code == kExitClean);
  for (const char* f : {"report.jsonl", "cells.csv", "tallies.csv", "er_curves.csv",
                        "pairwise.csv"}) {
    CAPTURE(f);
    CHECK(slurp(d / (std::string("one/") + f)) == slurp(d / (std::string("four/") + f)));
  }
}

TEST_CASE("eval: configuration errors exit 2") {
  TempDir d;
  CHECK(cli({"eval", "--golden", "--tools", "gitline,nosuch", "--report", d / "r"}).code ==
        kExitError);
  CHECK(cli({"eval", "--report", d / "r"}).code == kExitError);
  CHECK(cli({"eval", "--golden", "--corpus", d / "c", "--report", d / "r"}).code ==
        kExitError);
  CHECK(cli({"eval", "--golden", "--k-grid", "0", "--report", d / "r"}).code == kExitError);
  CHECK(cli({"eval", "--golden", "--fixup", "hires", "--report", d / "r"}).code ==
        kExitError);
  CHECK(cli({"eval", "--golden", "--compare", "fuzzy", "--report", d / "r"}).code ==
        kExitError);
  CHECK(cli({"eval", "--golden", "--jobs", "0", "--report", d / "r"}).code == kExitError);

  put(d / "empty/manifest.json", R"({"schema_version":1,"scenarios":[]})");
  CHECK(cli({"eval", "--corpus", d / "empty", "--report", d / "r"}).code == kExitError);
}

TEST_CASE("export-golden then eval --corpus matches --golden") {
  TempDir d;
  REQUIRE(cli({"export-golden", d / "golden"}).code == kExitClean);
  REQUIRE(cli({"eval", "--corpus", d / "golden", "--report", d / "a"}).code == kExitClean);
  REQUIRE(cli({"eval", "--golden", "--report", d / "b"}).code == kExitClean);
  CHECK(slurp(d / "a/report.jsonl") == slurp(d / "b/report.jsonl"));
}

TEST_CASE("the installed binary reports exit codes") {
  TempDir d;
  write_triple(d, "rename-value");
  const auto status = [&](const std::string& tool) {
    const std::string cmd = std::string("\"") + TRIMERGE_BIN + "\" merge \"" + (d / "base") +
                            "\" \"" + (d / "left") + "\" \"" + (d / "right") +
                            "\" --tool " + tool + " -o \"" + (d / "out") + "\" 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(raw));
    return WEXITSTATUS(raw);
  };
  CHECK(status("gitline") == 1);
  CHECK(status("hires") == 0);
  CHECK(status("nosuch") == 2);
}
