#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trimerge/align.hpp"
#include "trimerge/merge.hpp"
#include "trimerge/text.hpp"

namespace trimerge {

// --- Character-level merge -------------------------------------------------

/// Line merge first; each remaining conflict is retried one character per
/// line and replaced if that merge is clean.
MergeResult merge_hires(const Document& base, const Document& left,
                        const Document& right,
                        WhitespaceMode ws = WhitespaceMode::exact);

// --- Adjacent-line merge ---------------------------------------------------

/// Line merge first; each conflict is re-aligned with refine_chunk3() and
/// spliced in only if every refined piece resolves on its own.
MergeResult merge_adjacent(const Document& base, const Document& left,
                           const Document& right,
                           std::size_t cutoff = kDefaultRefineCutoff,
                           WhitespaceMode ws = WhitespaceMode::exact);

// --- Java imports ----------------------------------------------------------

struct ImportStmt {
  std::string raw;
  bool is_static = false;
  std::string path;  // dotted name, without a trailing ".*"
  bool is_wildcard = false;
  std::optional<std::string> simple_name;  // absent for wildcards

  /// Identity ignoring whitespace and trailing comments.
  std::string identity() const;
};

std::optional<ImportStmt> parse_import(std::string_view line);

/// Identifier tokens of Java-like source with comments and string/char
/// literals removed.
std::vector<std::string> identifier_tokens(std::string_view source);

MergeResult fix_imports(const MergeResult& result, const Document& base,
                        const Document& left, const Document& right);

// --- Version numbers -------------------------------------------------------

struct VersionToken {
  std::string numeric;  // e.g. "2.3.1", as written
  std::vector<std::uint64_t> components;
  std::string suffix;   // e.g. "-SNAPSHOT"
  std::size_t begin = 0;  // byte span within the line
  std::size_t end = 0;

  std::string text() const { return numeric + suffix; }
};

std::optional<VersionToken> find_version(std::string_view line);

/// Component-wise numeric comparison; the shorter list is padded with
/// zeros. Suffixes are ignored.
int compare_versions(const VersionToken& a, const VersionToken& b);

MergeResult fix_versions(const MergeResult& result);

// --- Composition -----------------------------------------------------------

MergeResult merge_ivn(const Document& base, const Document& left,
                      const Document& right,
                      WhitespaceMode ws = WhitespaceMode::exact);

// --- Registry --------------------------------------------------------------

struct ToolSpec {
  std::string name;
  WhitespaceMode ws = WhitespaceMode::exact;
  std::size_t cutoff = kDefaultRefineCutoff;
};

class UnknownTool : public std::invalid_argument {
 public:
  UnknownTool(const std::string& name, const std::vector<std::string>& valid);
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Stable public tool names, in report order.
const std::vector<std::string>& tool_names();

/// Default spec for a registered name; throws UnknownTool.
ToolSpec tool_spec(std::string_view name);

struct ToolRun {
  MergeResult result;
  std::chrono::nanoseconds elapsed{0};
};

MergeResult merge_with(const ToolSpec& spec, const Document& base,
                       const Document& left, const Document& right);

ToolRun run_tool(const ToolSpec& spec, const Document& base,
                 const Document& left, const Document& right);

/// A conflict-consuming post-processor.
using Fixup = std::function<MergeResult(const MergeResult&, const Document&,
                                        const Document&, const Document&)>;

const std::vector<std::string>& fixup_names();

/// "identity", "imports", "version-numbers" or "ivn"; throws UnknownTool.
Fixup fixup_by_name(std::string_view name);

}  // namespace trimerge
