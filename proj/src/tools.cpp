#include <algorithm>
#include <chrono>

#include "trimerge/strategies.hpp"

namespace trimerge {
namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

MergeResult fix_ivn(const MergeResult& r, const Document& base,
                    const Document& left, const Document& right) {
  return fix_versions(fix_imports(r, base, left, right));
}

}  // namespace

UnknownTool::UnknownTool(const std::string& name,
                         const std::vector<std::string>& valid)
    : std::invalid_argument("unknown tool '" + name +
                            "' (valid: " + join_names(valid) + ")"),
      name_(name) {}

MergeResult merge_ivn(const Document& base, const Document& left,
                      const Document& right, WhitespaceMode ws) {
  return fix_ivn(merge_lines(base, left, right, ws), base, left, right);
}

const std::vector<std::string>& tool_names() {
  static const std::vector<std::string> names = {
      "gitline", "gitline-ignorespace", "hires", "adjacent",
      "imports", "version-numbers",     "ivn",   "ivn-ignorespace"};
  return names;
}

ToolSpec tool_spec(std::string_view name) {
  const auto& names = tool_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw UnknownTool(std::string(name), names);
  }
  ToolSpec spec;
  spec.name = std::string(name);
  if (name.size() > 12 && name.substr(name.size() - 12) == "-ignorespace") {
    spec.ws = WhitespaceMode::ignore_space_change;
  }
  return spec;
}

MergeResult merge_with(const ToolSpec& spec, const Document& base,
                       const Document& left, const Document& right) {
  const std::string_view name = spec.name;
  if (name == "gitline" || name == "gitline-ignorespace") {
    return merge_lines(base, left, right, spec.ws);
  }
  if (name == "hires") return merge_hires(base, left, right, spec.ws);
  if (name == "adjacent") {
    return merge_adjacent(base, left, right, spec.cutoff, spec.ws);
  }
  if (name == "imports") {
    return fix_imports(merge_lines(base, left, right, spec.ws), base, left, right);
  }
  if (name == "version-numbers") {
    return fix_versions(merge_lines(base, left, right, spec.ws));
  }
  if (name == "ivn" || name == "ivn-ignorespace") {
    return merge_ivn(base, left, right, spec.ws);
  }
  throw UnknownTool(spec.name, tool_names());
}

ToolRun run_tool(const ToolSpec& spec, const Document& base,
                 const Document& left, const Document& right) {
  const auto start = std::chrono::steady_clock::now();
  ToolRun run{merge_with(spec, base, left, right), {}};
  run.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return run;
}

const std::vector<std::string>& fixup_names() {
  static const std::vector<std::string> names = {"identity", "imports",
                                                 "version-numbers", "ivn"};
  return names;
}

Fixup fixup_by_name(std::string_view name) {
  if (name == "identity") {
    return [](const MergeResult& r, const Document&, const Document&,
              const Document&) { return r; };
  }
  if (name == "imports") return fix_imports;
  if (name == "version-numbers") {
    return [](const MergeResult& r, const Document&, const Document&,
              const Document&) { return fix_versions(r); };
  }
  if (name == "ivn") return fix_ivn;
  throw UnknownTool(std::string(name), fixup_names());
}

}  // namespace trimerge
