#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "trimerge/align.hpp"
#include "trimerge/text.hpp"

namespace trimerge {

struct Resolved {
  Lines lines;
  friend bool operator==(const Resolved&, const Resolved&) = default;
};

struct Conflict {
  Lines base;
  Lines left;
  Lines right;
  friend bool operator==(const Conflict&, const Conflict&) = default;
};

using Segment = std::variant<Resolved, Conflict>;

/// Alternating resolved text and conflicts. Adjacent resolved segments are
/// always coalesced, and empty resolved segments are dropped.
class MergeResult {
 public:
  MergeResult() = default;

  void append(Resolved r);
  void append(Lines lines) { append(Resolved{std::move(lines)}); }
  void append(Conflict c);
  void append(Segment s);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  bool clean() const noexcept;
  std::size_t conflict_count() const noexcept;

  /// Resolved lines of a clean result; throws std::logic_error otherwise.
  Lines merged_lines() const;

  friend bool operator==(const MergeResult&, const MergeResult&) = default;

 private:
  std::vector<Segment> segments_;
};

enum class Side { base, left, right };

/// The given side as seen through the result: resolved text plus that
/// side's body of every conflict.
Document side_view(const MergeResult& result, Side side);

enum class ConflictStyleKind { merge, diff3, zdiff3 };

std::string_view to_string(ConflictStyleKind kind) noexcept;
std::optional<ConflictStyleKind> parse_conflict_style(std::string_view name);

inline constexpr std::size_t kMinMarkerSize = 7;

struct ConflictStyle {
  ConflictStyleKind kind = ConflictStyleKind::diff3;
  std::size_t marker_size = kMinMarkerSize;
  std::string left_label = "LEFT";
  std::string base_label = "BASE";
  std::string right_label = "RIGHT";

  /// Throws std::invalid_argument if marker_size is below the floor.
  void validate() const;
};

class MalformedConflict : public std::runtime_error {
 public:
  MalformedConflict(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Four-case rule for one changed chunk: agreement, one-sided change, or
/// conflict. Stable chunks yield the left parent's text.
std::variant<Lines, Conflict> resolve_chunk(const Chunk3& chunk,
                                            const Document& base,
                                            const Document& left,
                                            const Document& right,
                                            WhitespaceMode ws);

MergeResult resolve(const std::vector<Chunk3>& chunks, const Document& base,
                    const Document& left, const Document& right,
                    WhitespaceMode ws = WhitespaceMode::exact);

MergeResult merge_lines(const Document& base, const Document& left,
                        const Document& right,
                        WhitespaceMode ws = WhitespaceMode::exact);

std::string render(const MergeResult& result, const ConflictStyle& style = {});

/// Inverse of render() for the diff3 style. Base sections are read
/// whenever present, so merge-style files parse with empty base bodies.
MergeResult parse_conflicts(std::string_view text,
                            const ConflictStyle& style = {});

/// True if `text` contains a conflict-opening marker of the given size.
bool has_conflict_markers(std::string_view text,
                          std::size_t marker_size = kMinMarkerSize);

}  // namespace trimerge
