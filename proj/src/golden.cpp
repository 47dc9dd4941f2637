#include <algorithm>

#include "trimerge/corpus.hpp"

namespace trimerge {
namespace {

struct FileTexts {
  const char* path;
  const char* base;
  const char* left;
  const char* right;
  const char* expected;
};

MergeScenario make(std::string id, std::string source, std::string notes,
                   std::initializer_list<FileTexts> files) {
  MergeScenario s;
  s.id = std::move(id);
  s.tags["source"] = std::move(source);
  s.notes = std::move(notes);
  for (const auto& f : files) {
    s.files.push_back({f.path, split_lines(f.base), split_lines(f.left),
                       split_lines(f.right)});
    s.expected[f.path] = split_lines(f.expected);
  }
  return s;
}

// Rename versus value change on the same line.
MergeScenario rename_value() {
  return make("rename-value", "example", "independent edits to one line", {{
      "main.py",
      R"(def main():
    n = 128
    print(n)
)",
      R"(def main():
    n_people = 128
    print(n_people)
)",
      R"(def main():
    n = 64
    print(n)
)",
      R"(def main():
    n_people = 64
    print(n_people)
)"}});
}

// Rename versus a new call to the old name: merges cleanly, but wrongly.
MergeScenario stale_call() {
  return make("stale-call", "example", "clean line merge calls a renamed function", {{
      "mult.py",
      R"(def mult(a,b):
    return a*b
def main():
    a = 3*5
    print(a)
)",
      R"(def multiply(a,b):
    return a*b
def main():
    a = 3*5
    print(a)
)",
      R"(def mult(a,b):
    return a*b
def main():
    a = mult(3,5)
    print(a)
)",
      R"(def multiply(a,b):
    return a*b
def main():
    a = multiply(3,5)
    print(a)
)"}});
}

MergeScenario ranges_3183_11() {
  return make("3183-11", "real-world", "two inline refactorings of one declaration", {{
      "Ranges.java",
      "HashSet<Range> ranges = new HashSet<Range>();\n",
      "HashSet<Range> ranges = new HashSet<>();\n",
      "Set<Range> ranges = new HashSet<Range>();\n",
      "Set<Range> ranges = new HashSet<>();\n"}});
}

MergeScenario pom_25267_730() {
  return make("25267-730", "real-world", "both sides bump one version number", {{
      "pom.xml",
      "<version>23.6.0</version>\n",
      "<version>23.7.0</version>\n",
      "<version>23.6.1</version>\n",
      "<version>23.7.0</version>\n"}});
}

MergeScenario pom_18228_77() {
  return make("18228-77", "real-world", "snapshot versions bumped on both sides", {{
      "pom.xml",
      "<version>2.3.1-SNAPSHOT</version>\n",
      "<version>2.4.1-SNAPSHOT</version>\n",
      "<version>2.4.3-SNAPSHOT</version>\n",
      "<version>2.4.3-SNAPSHOT</version>\n"}});
}

MergeScenario parser_1215_3280() {
  return make("1215-3280", "real-world", "refactorings on adjacent lines", {{
      "Parser.java",
      R"(String comments = SourcesHelper.readerToString(reader);
CompilationUnit cu = new InstanceJavaParser(comments).parse();
)",
      R"(String comments = SourcesHelper.readerToString(reader);
CompilationUnit cu = new JavaParser().setSource(comments).parse();
)",
      R"(String comments = readerToString(reader);
CompilationUnit cu = new InstanceJavaParser(comments).parse();
)",
      R"(String comments = readerToString(reader);
CompilationUnit cu = new JavaParser().setSource(comments).parse();
)"}});
}

MergeScenario dns_5184_31() {
  return make("5184-31", "real-world", "adjacent edits that depend on each other", {{
      "DnsCache.java",
      R"(List<DNSEntry> entryList = this.get(dnsEntry.getKey());
if (entryList != null) {
    synchronized (entryList) {
        entryList.remove(dnsEntry);
    }
}
/* Remove from DNS cache when no records remain with this key */
if (result && entryList.isEmpty()) {
    this.remove(dnsEntry.getKey());
}
)",
      R"(synchronized (cacheMap) {
    List<DNSEntry> entryList = cacheMap.get(dnsEntry.getKey());
    if (entryList != null) {
        entryList.remove(dnsEntry);
    }
}
/* Remove from DNS cache when no records remain with this key */
if (result && entryList.isEmpty()) {
    this.remove(dnsEntry.getKey());
}
)",
      R"(List<DNSEntry> entryList = this.get(dnsEntry.getKey());
if (entryList != null) {
    synchronized (entryList) {
        result = entryList.remove(dnsEntry);
    }
}
/* Remove from DNS cache when no records remain with this key */
if (result && entryList.isEmpty()) {
    this.remove(dnsEntry.getKey());
}
)",
      R"(synchronized (cacheMap) {
    List<DNSEntry> entryList = cacheMap.get(dnsEntry.getKey());
    if (entryList != null) {
        result = entryList.remove(dnsEntry);
    }
    /* Remove from DNS cache when no records remain with this key */
    if (result && entryList.isEmpty()) {
        cacheMap.remove(dnsEntry.getKey());
    }
}
)"}});
}

MergeScenario javadoc_2955_73() {
  return make("2955-73", "real-world", "trailing space removed on one side", {{
      "Doc.java",
      " * \n",
      " * </p>\n",
      " *\n",
      " * </p>\n"}});
}

MergeScenario file_31280_110() {
  return make("31280-110", "real-world", "unrelated edits on adjacent lines", {{
      "FileUtil.java",
      R"(public static File inputStreamToFile(InputStream ins, String name) throws Exception{
   File file = new File(System.getProperty("java.io.tmpdir") + name);
)",
      R"(public static File inputStreamToFile(InputStream ins, String name) throws Exception {
   File file = new File(System.getProperty("java.io.tmpdir") + name);
)",
      R"(public static File inputStreamToFile(InputStream ins, String name) throws Exception{
   File file = new File(System.getProperty("java.io.tmpdir") + File.separator + name);
)",
      R"(public static File inputStreamToFile(InputStream ins, String name) throws Exception {
   File file = new File(System.getProperty("java.io.tmpdir") + File.separator + name);
)"}});
}

// A wrong clean hunk in one file and an import-only conflict in another:
// once the imports are resolved the merge is complete but incorrect.
MergeScenario reclassified() {
  return make("reclassify-imports", "constructed",
              "wrong clean merge hidden behind an import conflict", {
      {"src/Calc.java",
       R"(package demo;

public class Calc {
    static int mult(int a, int b) {
        return a * b;
    }

    static int area() {
        return 3 * 5;
    }
}
)",
       R"(package demo;

public class Calc {
    static int multiply(int a, int b) {
        return a * b;
    }

    static int area() {
        return 3 * 5;
    }
}
)",
       R"(package demo;

public class Calc {
    static int mult(int a, int b) {
        return a * b;
    }

    static int area() {
        return mult(3, 5);
    }
}
)",
       R"(package demo;

public class Calc {
    static int multiply(int a, int b) {
        return a * b;
    }

    static int area() {
        return multiply(3, 5);
    }
}
)"},
      {"src/App.java",
       R"(package demo;

import java.util.List;

public class App {
    List<String> names;
}
)",
       R"(package demo;

import java.util.List;
import java.util.Map;

public class App {
    Map<String, Integer> counts;
    List<String> names;
}
)",
       R"(package demo;

import java.util.List;
import java.util.Set;

public class App {
    List<String> names;
    Set<String> tags;
}
)",
       R"(package demo;

import java.util.List;
import java.util.Map;
import java.util.Set;

public class App {
    Map<String, Integer> counts;
    List<String> names;
    Set<String> tags;
}
)"}});
}

}  // namespace

Corpus golden_corpus() {
  Corpus c;
  c.name = "golden";
  c.scenarios = {rename_value(),   stale_call(),   ranges_3183_11(),
                 pom_25267_730(),  pom_18228_77(), parser_1215_3280(),
                 dns_5184_31(),    javadoc_2955_73(), file_31280_110(),
                 reclassified()};
  for (auto& s : c.scenarios) {
    std::sort(s.files.begin(), s.files.end(),
              [](const ScenarioFile& a, const ScenarioFile& b) { return a.path < b.path; });
  }
  return c;
}

}  // namespace trimerge
