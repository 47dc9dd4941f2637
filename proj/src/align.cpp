#include "trimerge/align.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace trimerge {
namespace {

class KeyInterner {
 public:
  explicit KeyInterner(WhitespaceMode ws) : ws_(ws) {}

  std::vector<int> intern(const Line* lines, std::size_t n) {
    std::vector<int> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, inserted] =
          ids_.try_emplace(line_key(lines[i], ws_), static_cast<int>(ids_.size()));
      ids[i] = it->second;
    }
    return ids;
  }

 private:
  WhitespaceMode ws_;
  std::unordered_map<std::string, int> ids_;
};

// Myers' O(ND) difference algorithm with the linear-space middle-snake
// refinement. Marks removed elements of `a` and inserted elements of `b`.
class MyersDiff {
 public:
  MyersDiff(const std::vector<int>& a, const std::vector<int>& b)
      : a_(a), b_(b), removed_(a.size(), false), inserted_(b.size(), false) {}

  void run() { compare(0, static_cast<long>(a_.size()), 0, static_cast<long>(b_.size())); }

  const std::vector<bool>& removed() const { return removed_; }
  const std::vector<bool>& inserted() const { return inserted_; }

 private:
  void compare(long a0, long a1, long b0, long b1) {
    while (a0 < a1 && b0 < b1 && a_[a0] == b_[b0]) {
      ++a0;
      ++b0;
    }
    while (a0 < a1 && b0 < b1 && a_[a1 - 1] == b_[b1 - 1]) {
      --a1;
      --b1;
    }
    if (a0 == a1) {
      for (long j = b0; j < b1; ++j) inserted_[j] = true;
      return;
    }
    if (b0 == b1) {
      for (long i = a0; i < a1; ++i) removed_[i] = true;
      return;
    }
    long x = 0;
    long y = 0;
    if (!middle_snake(a0, a1, b0, b1, x, y)) {
      for (long i = a0; i < a1; ++i) removed_[i] = true;
      for (long j = b0; j < b1; ++j) inserted_[j] = true;
      return;
    }
    compare(a0, a0 + x, b0, b0 + y);
    compare(a0 + x, a1, b0 + y, b1);
  }

  // Finds a point (x, y), relative to (a0, b0), on a shortest edit path.
  bool middle_snake(long a0, long a1, long b0, long b1, long& out_x,
                    long& out_y) {
    const long n = a1 - a0;
    const long m = b1 - b0;
    const long max_d = (n + m + 1) / 2;
    const long v_offset = max_d;
    const long v_length = 2 * max_d + 2;
    fwd_.assign(static_cast<std::size_t>(v_length), -1);
    rev_.assign(static_cast<std::size_t>(v_length), -1);
    fwd_[v_offset + 1] = 0;
    rev_[v_offset + 1] = 0;
    const long delta = n - m;
    const bool front = (delta % 2) != 0;
    long k1start = 0, k1end = 0, k2start = 0, k2end = 0;
    const auto A = [&](long i) { return a_[a0 + i]; };
    const auto B = [&](long j) { return b_[b0 + j]; };

    for (long d = 0; d < max_d; ++d) {
      for (long k1 = -d + k1start; k1 <= d - k1end; k1 += 2) {
        const long k1_offset = v_offset + k1;
        long x1;
        if (k1 == -d || (k1 != d && fwd_[k1_offset - 1] < fwd_[k1_offset + 1])) {
          x1 = fwd_[k1_offset + 1];
        } else {
          x1 = fwd_[k1_offset - 1] + 1;
        }
        long y1 = x1 - k1;
        while (x1 < n && y1 < m && A(x1) == B(y1)) {
          ++x1;
          ++y1;
        }
        fwd_[k1_offset] = x1;
        if (x1 > n) {
          k1end += 2;
        } else if (y1 > m) {
          k1start += 2;
        } else if (front) {
          const long k2_offset = v_offset + delta - k1;
          if (k2_offset >= 0 && k2_offset < v_length && rev_[k2_offset] != -1) {
            const long x2 = n - rev_[k2_offset];
            if (x1 >= x2) {
              out_x = x1;
              out_y = y1;
              return true;
            }
          }
        }
      }
      for (long k2 = -d + k2start; k2 <= d - k2end; k2 += 2) {
        const long k2_offset = v_offset + k2;
        long x2;
        if (k2 == -d || (k2 != d && rev_[k2_offset - 1] < rev_[k2_offset + 1])) {
          x2 = rev_[k2_offset + 1];
        } else {
          x2 = rev_[k2_offset - 1] + 1;
        }
        long y2 = x2 - k2;
        while (x2 < n && y2 < m && A(n - x2 - 1) == B(m - y2 - 1)) {
          ++x2;
          ++y2;
        }
        rev_[k2_offset] = x2;
        if (x2 > n) {
          k2end += 2;
        } else if (y2 > m) {
          k2start += 2;
        } else if (!front) {
          const long k1_offset = v_offset + delta - k2;
          if (k1_offset >= 0 && k1_offset < v_length && fwd_[k1_offset] != -1) {
            const long x1 = fwd_[k1_offset];
            const long y1 = v_offset + x1 - k1_offset;
            if (x1 >= n - x2) {
              out_x = x1;
              out_y = y1;
              return true;
            }
          }
        }
      }
    }
    return false;
  }

  const std::vector<int>& a_;
  const std::vector<int>& b_;
  std::vector<bool> removed_;
  std::vector<bool> inserted_;
  std::vector<long> fwd_;
  std::vector<long> rev_;
};

// For each line of `a`, the index of the line of `b` it is kept as.
std::vector<std::optional<std::size_t>> kept_positions(const EditScript& script,
                                                       std::size_t a_size) {
  std::vector<std::optional<std::size_t>> pos(a_size);
  std::size_t i = 0;
  std::size_t j = 0;
  for (const auto& op : script.ops) {
    switch (op.kind) {
      case EditKind::keep:
        for (std::size_t n = 0; n < op.count; ++n) pos.at(i++) = j++;
        break;
      case EditKind::remove:
        i += op.count;
        break;
      case EditKind::insert:
        j += op.count;
        break;
    }
  }
  return pos;
}

}  // namespace

std::size_t EditScript::removed() const {
  std::size_t n = 0;
  for (const auto& op : ops) {
    if (op.kind == EditKind::remove) n += op.count;
  }
  return n;
}

std::size_t EditScript::inserted() const {
  std::size_t n = 0;
  for (const auto& op : ops) {
    if (op.kind == EditKind::insert) n += op.count;
  }
  return n;
}

Lines EditScript::apply(const Lines& a) const {
  Lines out;
  std::size_t i = 0;
  for (const auto& op : ops) {
    switch (op.kind) {
      case EditKind::keep:
        if (i + op.count > a.size()) {
          throw std::invalid_argument("edit script keeps past end of input");
        }
        out.insert(out.end(), a.begin() + static_cast<long>(i),
                   a.begin() + static_cast<long>(i + op.count));
        i += op.count;
        break;
      case EditKind::remove:
        if (i + op.count > a.size()) {
          throw std::invalid_argument("edit script removes past end of input");
        }
        i += op.count;
        break;
      case EditKind::insert:
        out.insert(out.end(), op.lines.begin(), op.lines.end());
        break;
    }
  }
  if (i != a.size()) {
    throw std::invalid_argument("edit script does not consume its input");
  }
  return out;
}

EditScript diff2(const Document& a, const Document& b, WhitespaceMode ws) {
  KeyInterner interner(ws);
  const auto a_ids = interner.intern(a.lines.data(), a.size());
  const auto b_ids = interner.intern(b.lines.data(), b.size());
  MyersDiff diff(a_ids, b_ids);
  diff.run();
  const auto& removed = diff.removed();
  const auto& inserted = diff.inserted();

  EditScript script;
  std::size_t i = 0;
  std::size_t j = 0;
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  while (i < n || j < m) {
    std::size_t keep = 0;
    while (i < n && j < m && !removed[i] && !inserted[j]) {
      ++i;
      ++j;
      ++keep;
    }
    if (keep > 0) script.ops.push_back({EditKind::keep, keep, {}});
    std::size_t del = 0;
    Lines ins;
    while ((i < n && removed[i]) || (j < m && inserted[j])) {
      while (i < n && removed[i]) {
        ++i;
        ++del;
      }
      while (j < m && inserted[j]) ins.push_back(b.lines[j++]);
    }
    if (keep == 0 && del == 0 && ins.empty()) {
      throw std::logic_error("diff2: inconsistent change marks");
    }
    if (del > 0) script.ops.push_back({EditKind::remove, del, {}});
    if (!ins.empty()) {
      const std::size_t count = ins.size();
      script.ops.push_back({EditKind::insert, count, std::move(ins)});
    }
  }
  return script;
}

std::vector<Chunk3> chunk3(const Document& base, const Document& left,
                           const Document& right, WhitespaceMode ws,
                           const Aligner& aligner) {
  const auto align = [&](const Document& other) {
    return aligner ? aligner(base, other, ws) : diff2(base, other, ws);
  };
  const auto in_left = kept_positions(align(left), base.size());
  const auto in_right = kept_positions(align(right), base.size());

  std::vector<Chunk3> chunks;
  std::size_t b = 0, l = 0, r = 0;
  const auto push_stable = [&](std::size_t bi, std::size_t li, std::size_t ri) {
    if (!chunks.empty() && chunks.back().kind == ChunkKind::stable &&
        chunks.back().base.end == bi && chunks.back().left.end == li &&
        chunks.back().right.end == ri) {
      ++chunks.back().base.end;
      ++chunks.back().left.end;
      ++chunks.back().right.end;
    } else {
      chunks.push_back({ChunkKind::stable, {bi, bi + 1}, {li, li + 1}, {ri, ri + 1}});
    }
  };
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!in_left[i] || !in_right[i]) continue;
    const std::size_t li = *in_left[i];
    const std::size_t ri = *in_right[i];
    if (i > b || li > l || ri > r) {
      chunks.push_back({ChunkKind::changed, {b, i}, {l, li}, {r, ri}});
    }
    push_stable(i, li, ri);
    b = i + 1;
    l = li + 1;
    r = ri + 1;
  }
  if (b < base.size() || l < left.size() || r < right.size()) {
    chunks.push_back({ChunkKind::changed,
                      {b, base.size()},
                      {l, left.size()},
                      {r, right.size()}});
  }
  return chunks;
}

namespace {

enum Side : unsigned { kNone = 0, kLeft = 1, kRight = 2, kBoth = 3 };

// One step of the three-way alignment: a base line (with whether each parent
// kept it) or the run of parent-only lines inserted before the next base line.
struct Unit {
  bool is_base_line = false;
  std::size_t left_len = 0;
  std::size_t right_len = 0;
  unsigned sides = kNone;
  bool paired = false;  // holds a line both parents inserted
};

// Column moves of the three-sequence alignment, in tie-break order.
struct Move {
  int db, dl, dr;
  unsigned weight;
};
constexpr Move kMoves[] = {
    {1, 1, 1, 4},  // base line kept by both
    {1, 1, 0, 2},  // kept by left only
    {1, 0, 1, 2},  // kept by right only
    {0, 1, 1, 1},  // identical line inserted by both
    {1, 0, 0, 0},  // removed by both
    {0, 1, 0, 0},  // inserted by left
    {0, 0, 1, 0},  // inserted by right
};

std::vector<Unit> align_three(const std::vector<int>& bs,
                              const std::vector<int>& ls,
                              const std::vector<int>& rs) {
  const std::size_t nb = bs.size(), nl = ls.size(), nr = rs.size();
  const std::size_t sl = nl + 1, sr = nr + 1;
  // best[i][j][k]: best score aligning the suffixes bs[i:], ls[j:], rs[k:].
  std::vector<std::uint16_t> best((nb + 1) * sl * sr, 0);
  const auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> std::uint16_t& {
    return best[(i * sl + j) * sr + k];
  };
  const auto allowed = [&](const Move& mv, std::size_t i, std::size_t j, std::size_t k) {
    if ((mv.db && i >= nb) || (mv.dl && j >= nl) || (mv.dr && k >= nr)) return false;
    if (mv.db && mv.dl && bs[i] != ls[j]) return false;
    if (mv.db && mv.dr && bs[i] != rs[k]) return false;
    if (!mv.db && mv.dl && mv.dr && ls[j] != rs[k]) return false;
    return true;
  };
  for (std::size_t i = nb + 1; i-- > 0;) {
    for (std::size_t j = nl + 1; j-- > 0;) {
      for (std::size_t k = nr + 1; k-- > 0;) {
        unsigned v = 0;
        for (const auto& mv : kMoves) {
          if (!allowed(mv, i, j, k)) continue;
          v = std::max(v, mv.weight + at(i + mv.db, j + mv.dl, k + mv.dr));
        }
        at(i, j, k) = static_cast<std::uint16_t>(v);
      }
    }
  }

  std::vector<Unit> units;
  Unit gap;
  const auto flush_gap = [&] {
    if (gap.left_len || gap.right_len) units.push_back(gap);
    gap = Unit{};
  };
  std::size_t i = 0, j = 0, k = 0;
  while (i < nb || j < nl || k < nr) {
    const Move* chosen = nullptr;
    for (const auto& mv : kMoves) {
      if (allowed(mv, i, j, k) &&
          mv.weight + at(i + mv.db, j + mv.dl, k + mv.dr) == at(i, j, k)) {
        chosen = &mv;
        break;
      }
    }
    if (!chosen) throw std::logic_error("refine_chunk3: broken traceback");
    if (chosen->db) {
      flush_gap();
      Unit u;
      u.is_base_line = true;
      u.left_len = chosen->dl;
      u.right_len = chosen->dr;
      u.sides = (chosen->dl ? kNone : kLeft) | (chosen->dr ? kNone : kRight);
      units.push_back(u);
    } else {
      gap.left_len += chosen->dl;
      gap.right_len += chosen->dr;
      if (chosen->dl) gap.sides |= kLeft;
      if (chosen->dr) gap.sides |= kRight;
      if (chosen->dl && chosen->dr) gap.paired = true;
    }
    i += chosen->db;
    j += chosen->dl;
    k += chosen->dr;
  }
  flush_gap();
  return units;
}

}  // namespace

std::optional<std::vector<Chunk3>> refine_chunk3(const Chunk3& chunk,
                                                 const Document& base,
                                                 const Document& left,
                                                 const Document& right,
                                                 std::size_t cutoff,
                                                 WhitespaceMode ws) {
  if (chunk.kind != ChunkKind::changed) {
    throw std::invalid_argument("refine_chunk3 expects a changed chunk");
  }
  if (chunk.base.end > base.size() || chunk.left.end > left.size() ||
      chunk.right.end > right.size()) {
    throw std::out_of_range("refine_chunk3: chunk exceeds its documents");
  }
  const std::size_t nb = chunk.base.size(), nl = chunk.left.size(),
                    nr = chunk.right.size();
  if (nb > cutoff || nl > cutoff || nr > cutoff) return std::nullopt;
  if (4 * nb + nl + nr > std::numeric_limits<std::uint16_t>::max()) {
    return std::nullopt;
  }

  KeyInterner interner(ws);
  const auto bs = interner.intern(base.lines.data() + chunk.base.begin, nb);
  const auto ls = interner.intern(left.lines.data() + chunk.left.begin, nl);
  const auto rs = interner.intern(right.lines.data() + chunk.right.begin, nr);
  const auto units = align_three(bs, ls, rs);

  struct Open {
    Chunk3 chunk;
    unsigned sides;
  };
  std::vector<Chunk3> out;
  std::vector<unsigned> out_sides;  // parallel to out; kNone for stable
  std::optional<Open> open;
  std::size_t b = chunk.base.begin, l = chunk.left.begin, r = chunk.right.begin;
  bool sticky = false;

  const auto close = [&] {
    if (open) {
      out.push_back(open->chunk);
      out_sides.push_back(open->sides);
    }
    open.reset();
  };
  const auto start = [&](unsigned sides) {
    close();
    open = Open{{ChunkKind::changed, {b, b}, {l, l}, {r, r}}, sides};
  };
  const auto extend = [&](const Unit& u) {
    const std::size_t db = u.is_base_line ? 1 : 0;
    if (open) {
      open->chunk.base.end += db;
      open->chunk.left.end += u.left_len;
      open->chunk.right.end += u.right_len;
      open->sides |= u.sides;
    }
    b += db;
    l += u.left_len;
    r += u.right_len;
  };

  for (std::size_t n = 0; n < units.size(); ++n) {
    const Unit& u = units[n];
    if (u.is_base_line) {
      if (u.sides == kNone) {
        close();
        sticky = false;
        if (!out.empty() && out.back().kind == ChunkKind::stable) {
          ++out.back().base.end;
          ++out.back().left.end;
          ++out.back().right.end;
        } else {
          out.push_back({ChunkKind::stable, {b, b + 1}, {l, l + 1}, {r, r + 1}});
          out_sides.push_back(kNone);
        }
        extend(u);
        continue;
      }
      if (!(open && (sticky || open->sides == u.sides))) start(u.sides);
      sticky = false;
      extend(u);
      continue;
    }

    // Parent-only insertions between base lines.
    const unsigned next_sides =
        (n + 1 < units.size() && units[n + 1].is_base_line) ? units[n + 1].sides
                                                             : kNone;
    const unsigned open_sides = open ? open->sides : kNone;
    if (u.sides == kBoth && !u.paired && (open_sides == kLeft || open_sides == kRight) &&
        (next_sides & ~open_sides & kBoth)) {
      // One parent's replacement ends here and the other's begins: split.
      Unit tail = u, head = u;
      if (open_sides == kLeft) {
        tail.right_len = 0;
        head.left_len = 0;
      } else {
        tail.left_len = 0;
        head.right_len = 0;
      }
      tail.sides = open_sides;
      head.sides = kBoth & ~open_sides;
      extend(tail);
      start(head.sides);
      sticky = true;
      extend(head);
      continue;
    }
    if (u.sides == kBoth) {
      if (!open) start(kBoth);
      sticky = true;
    } else if (open && (open->sides & u.sides)) {
      // Continues the same parent's change.
    } else if (next_sides & u.sides) {
      start(u.sides);
      sticky = true;
    } else if (open && next_sides != kNone) {
      // Inserted strictly inside the other parent's change: overlap.
      open->sides = kBoth;
      sticky = true;
    } else {
      start(u.sides);
      sticky = false;
    }
    extend(u);
  }
  close();

  // A run of lines both parents removed is only an agreement if neither
  // parent's inserted text could equally stand for it. Inserted lines can
  // slide across the base lines that parent removed, so when one parent's
  // insertion reaches the run from before and the other's from after, the
  // two rewrites collide and everything between them is folded into one
  // chunk.
  const auto reach = [&](std::size_t i, unsigned side, int step) -> std::optional<std::size_t> {
    for (std::size_t m = i + step; m < out.size(); m += step) {
      if (!(out_sides[m] & side)) return std::nullopt;
      const auto& range = side == kLeft ? out[m].left : out[m].right;
      if (!range.empty()) return m;
    }
    return std::nullopt;
  };
  for (std::size_t i = 0; i < out.size(); ++i) {
    const bool shared_delete = out_sides[i] == kBoth && !out[i].base.empty() &&
                               out[i].left.empty() && out[i].right.empty();
    if (!shared_delete) continue;
    for (const auto& [before, after] : {std::pair{kLeft, kRight}, std::pair{kRight, kLeft}}) {
      const auto j = reach(i, before, -1);
      const auto k = reach(i, after, 1);
      if (!j || !k) continue;
      out[*j].base.end = out[*k].base.end;
      out[*j].left.end = out[*k].left.end;
      out[*j].right.end = out[*k].right.end;
      out_sides[*j] = kBoth;
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(*j + 1),
                out.begin() + static_cast<std::ptrdiff_t>(*k + 1));
      out_sides.erase(out_sides.begin() + static_cast<std::ptrdiff_t>(*j + 1),
                      out_sides.begin() + static_cast<std::ptrdiff_t>(*k + 1));
      i = *j;
      break;
    }
  }
  return out;
}

}  // namespace trimerge
