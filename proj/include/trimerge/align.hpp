#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "trimerge/text.hpp"

namespace trimerge {

enum class EditKind { keep, remove, insert };

struct EditOp {
  EditKind kind;
  std::size_t count = 0;
  Lines lines;  // inserted lines, count == lines.size(); empty unless kind == insert

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

/// A -> B transformation. Between two keeps, all removals precede all
/// insertions, so no two adjacent ops share a kind.
struct EditScript {
  std::vector<EditOp> ops;

  std::size_t removed() const;
  std::size_t inserted() const;
  std::size_t cost() const { return removed() + inserted(); }

  /// Replays the script over `a`. Throws std::invalid_argument if the
  /// script does not fit `a`.
  Lines apply(const Lines& a) const;

  friend bool operator==(const EditScript&, const EditScript&) = default;
};

/// Shortest edit script under line_key equality (Myers, linear space).
EditScript diff2(const Document& a, const Document& b,
                 WhitespaceMode ws = WhitespaceMode::exact);

using Aligner =
    std::function<EditScript(const Document&, const Document&, WhitespaceMode)>;

struct LineRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return begin == end; }

  friend bool operator==(const LineRange&, const LineRange&) = default;
};

enum class ChunkKind { stable, changed };

struct Chunk3 {
  ChunkKind kind = ChunkKind::stable;
  LineRange base;
  LineRange left;
  LineRange right;

  friend bool operator==(const Chunk3&, const Chunk3&) = default;
};

/// Partitions the triple into stable and changed chunks. A base line is
/// stable when both parents keep it; consecutive changed regions are never
/// split, which is why edits on adjacent lines conflict.
std::vector<Chunk3> chunk3(const Document& base, const Document& left,
                           const Document& right,
                           WhitespaceMode ws = WhitespaceMode::exact,
                           const Aligner& aligner = {});

inline constexpr std::size_t kDefaultRefineCutoff = 200;

/// Re-partitions one changed chunk with a dynamic program over
/// base x left x right, splitting it wherever the two parents touch
/// disjoint lines. Returns nullopt when a side exceeds `cutoff` lines.
std::optional<std::vector<Chunk3>> refine_chunk3(
    const Chunk3& chunk, const Document& base, const Document& left,
    const Document& right, std::size_t cutoff = kDefaultRefineCutoff,
    WhitespaceMode ws = WhitespaceMode::exact);

}  // namespace trimerge
