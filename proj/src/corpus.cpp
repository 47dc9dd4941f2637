#include "trimerge/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "json.hpp"

namespace trimerge {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string ManifestEntry::side_dir(const std::string& side) const {
  const std::optional<std::string>* custom = nullptr;
  if (side == "base") custom = &base;
  if (side == "left") custom = &left;
  if (side == "right") custom = &right;
  if (side == "expected") custom = &expected;
  if (custom && *custom) return **custom;
  return path + "/" + side;
}

namespace {

const char* const kSides[] = {"base", "left", "right", "expected"};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw CorpusError("cannot read " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw CorpusError("cannot write " + p.string());
}

/// Regular files under `dir`, keyed by '/'-separated relative path.
std::map<std::string, Document> read_tree(const fs::path& dir) {
  std::map<std::string, Document> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    files[fs::relative(e.path(), dir).generic_string()] = split_lines(read_file(e.path()));
  }
  return files;
}

bool safe_relative(const std::string& p) {
  const fs::path rel(p);
  if (p.empty() || rel.is_absolute()) return false;
  return std::none_of(rel.begin(), rel.end(),
                      [](const fs::path& part) { return part == ".."; });
}

std::string get_string(const ordered_json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw CorpusError(where + ": field '" + key + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const ordered_json::exception& e) {
    throw CorpusError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw CorpusError("manifest must be a JSON object");
  const auto version = doc.find("schema_version");
  if (version == doc.end() || *version != kCorpusSchemaVersion) {
    throw CorpusError("manifest schema_version must be " +
                      std::to_string(kCorpusSchemaVersion));
  }
  const auto list = doc.find("scenarios");
  if (list == doc.end() || !list->is_array()) {
    throw CorpusError("manifest needs a 'scenarios' array");
  }
  std::vector<ManifestEntry> entries;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const auto& rec = (*list)[i];
    const std::string where = "scenario #" + std::to_string(i);
    if (!rec.is_object()) throw CorpusError(where + " must be an object");
    ManifestEntry e;
    e.id = get_string(rec, "id", where);
    if (e.id.empty()) throw CorpusError(where + ": empty id");
    if (!ids.insert(e.id).second) throw CorpusError("duplicate scenario id '" + e.id + "'");
    e.path = get_string(rec, "path", where);
    if (!safe_relative(e.path)) {
      throw CorpusError("scenario " + e.id + ": path must be relative and stay inside the corpus");
    }
    if (const auto t = rec.find("tags"); t != rec.end()) {
      if (!t->is_object()) throw CorpusError("scenario " + e.id + ": tags must be an object");
      for (const auto& [k, v] : t->items()) {
        if (!v.is_string()) throw CorpusError("scenario " + e.id + ": tag values must be strings");
        e.tags[k] = v.get<std::string>();
      }
    }
    if (rec.contains("notes")) e.notes = get_string(rec, "notes", "scenario " + e.id);
    for (const char* side : kSides) {
      if (!rec.contains(side)) continue;
      std::string dir = get_string(rec, side, "scenario " + e.id);
      if (!safe_relative(dir)) {
        throw CorpusError("scenario " + e.id + ": " + side + " path must be relative");
      }
      if (std::string_view(side) == "base") e.base = dir;
      if (std::string_view(side) == "left") e.left = dir;
      if (std::string_view(side) == "right") e.right = dir;
      if (std::string_view(side) == "expected") e.expected = dir;
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ManifestEntry> read_manifest(const fs::path& root) {
  const fs::path manifest = root / "manifest.json";
  if (!fs::is_regular_file(manifest)) {
    throw CorpusError("no manifest.json in " + root.string());
  }
  auto entries = parse_manifest(read_file(manifest));
  for (const auto& e : entries) {
    for (const char* side : kSides) {
      const fs::path dir = root / e.side_dir(side);
      if (!fs::is_directory(dir)) {
        throw CorpusError("scenario " + e.id + ": missing directory " + dir.string());
      }
    }
  }
  return entries;
}

MergeScenario load_scenario(const fs::path& root, const ManifestEntry& entry) {
  MergeScenario s;
  s.id = entry.id;
  s.tags = entry.tags;
  s.notes = entry.notes;
  std::map<std::string, Document> trees[3];
  std::set<std::string> paths;
  for (int i = 0; i < 3; ++i) {
    const fs::path dir = root / entry.side_dir(kSides[i]);
    if (!fs::is_directory(dir)) {
      throw CorpusError("scenario " + entry.id + ": missing directory " + dir.string());
    }
    trees[i] = read_tree(dir);
    for (const auto& [p, doc] : trees[i]) paths.insert(p);
  }
  const fs::path exp_dir = root / entry.side_dir("expected");
  if (!fs::is_directory(exp_dir)) {
    throw CorpusError("scenario " + entry.id + ": missing directory " + exp_dir.string());
  }
  s.expected = read_tree(exp_dir);
  for (const auto& p : paths) {
    if (!s.expected.count(p)) {
      throw CorpusError("scenario " + entry.id + ": no expected file for " + p);
    }
    ScenarioFile f;
    f.path = p;
    if (auto it = trees[0].find(p); it != trees[0].end()) f.base = it->second;
    if (auto it = trees[1].find(p); it != trees[1].end()) f.left = it->second;
    if (auto it = trees[2].find(p); it != trees[2].end()) f.right = it->second;
    s.files.push_back(std::move(f));
  }
  for (const auto& [p, doc] : s.expected) {
    if (!paths.count(p)) {
      throw CorpusError("scenario " + entry.id + ": expected file " + p +
                        " has no base, left or right version");
    }
  }
  return s;
}

Corpus load_corpus(const fs::path& root) {
  Corpus c;
  c.name = fs::absolute(root).lexically_normal().filename().string();
  if (c.name.empty()) c.name = fs::absolute(root).parent_path().filename().string();
  for (const auto& e : read_manifest(root)) c.scenarios.push_back(load_scenario(root, e));
  return c;
}

void write_corpus(const fs::path& root, const Corpus& corpus) {
  ordered_json list = ordered_json::array();
  std::set<std::string> ids;
  for (const auto& s : corpus.scenarios) {
    if (!ids.insert(s.id).second) throw CorpusError("duplicate scenario id '" + s.id + "'");
    if (!safe_relative(s.id)) throw CorpusError("scenario id '" + s.id + "' is not a usable directory name");
    ordered_json rec;
    rec["id"] = s.id;
    rec["path"] = s.id;
    rec["tags"] = ordered_json::object();
    for (const auto& [k, v] : s.tags) rec["tags"][k] = v;
    if (!s.notes.empty()) rec["notes"] = s.notes;
    list.push_back(std::move(rec));

    const fs::path dir = root / s.id;
    for (const char* side : kSides) fs::create_directories(dir / side);
    for (const auto& f : s.files) {
      // An empty side is written as an absent file, which is how it loads.
      const bool all_empty = f.base.empty() && f.left.empty() && f.right.empty();
      if (!f.base.empty() || all_empty) write_file(dir / "base" / f.path, f.base.text());
      if (!f.left.empty()) write_file(dir / "left" / f.path, f.left.text());
      if (!f.right.empty()) write_file(dir / "right" / f.path, f.right.text());
    }
    for (const auto& [p, doc] : s.expected) write_file(dir / "expected" / p, doc.text());
  }
  ordered_json manifest;
  manifest["schema_version"] = kCorpusSchemaVersion;
  manifest["scenarios"] = std::move(list);
  write_file(root / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace trimerge
