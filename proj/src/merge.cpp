#include "trimerge/merge.hpp"

#include <algorithm>

namespace trimerge {

void MergeResult::append(Resolved r) {
  if (r.lines.empty()) return;
  if (!segments_.empty()) {
    if (auto* last = std::get_if<Resolved>(&segments_.back())) {
      last->lines.insert(last->lines.end(),
                         std::make_move_iterator(r.lines.begin()),
                         std::make_move_iterator(r.lines.end()));
      return;
    }
  }
  segments_.emplace_back(std::move(r));
}

void MergeResult::append(Conflict c) { segments_.emplace_back(std::move(c)); }

void MergeResult::append(Segment s) {
  std::visit([this](auto&& seg) { append(std::move(seg)); }, std::move(s));
}

bool MergeResult::clean() const noexcept { return conflict_count() == 0; }

std::size_t MergeResult::conflict_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(segments_.begin(), segments_.end(), [](const Segment& s) {
        return std::holds_alternative<Conflict>(s);
      }));
}

Lines MergeResult::merged_lines() const {
  if (!clean()) throw std::logic_error("merge result still has conflicts");
  Lines out;
  for (const auto& seg : segments_) {
    const auto& lines = std::get<Resolved>(seg).lines;
    out.insert(out.end(), lines.begin(), lines.end());
  }
  return out;
}

Document side_view(const MergeResult& result, Side side) {
  Document doc;
  for (const auto& seg : result.segments()) {
    const Lines* part = nullptr;
    if (const auto* r = std::get_if<Resolved>(&seg)) {
      part = &r->lines;
    } else {
      const auto& c = std::get<Conflict>(seg);
      part = side == Side::base ? &c.base : side == Side::left ? &c.left : &c.right;
    }
    doc.lines.insert(doc.lines.end(), part->begin(), part->end());
  }
  return doc;
}

std::string_view to_string(ConflictStyleKind kind) noexcept {
  switch (kind) {
    case ConflictStyleKind::merge:
      return "merge";
    case ConflictStyleKind::diff3:
      return "diff3";
    case ConflictStyleKind::zdiff3:
      return "zdiff3";
  }
  return "diff3";
}

std::optional<ConflictStyleKind> parse_conflict_style(std::string_view name) {
  if (name == "merge") return ConflictStyleKind::merge;
  if (name == "diff3") return ConflictStyleKind::diff3;
  if (name == "zdiff3") return ConflictStyleKind::zdiff3;
  return std::nullopt;
}

void ConflictStyle::validate() const {
  if (marker_size < kMinMarkerSize) {
    throw std::invalid_argument("conflict marker size must be at least " +
                                std::to_string(kMinMarkerSize));
  }
}

MalformedConflict::MalformedConflict(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

Lines slice(const Document& doc, const LineRange& r) {
  return Lines(doc.lines.begin() + static_cast<long>(r.begin),
               doc.lines.begin() + static_cast<long>(r.end));
}

bool same(const Document& a, const LineRange& ra, const Document& b,
          const LineRange& rb, WhitespaceMode ws) {
  return ranges_equal(a.lines.data() + ra.begin, ra.size(),
                      b.lines.data() + rb.begin, rb.size(), ws);
}

}  // namespace

std::variant<Lines, Conflict> resolve_chunk(const Chunk3& chunk,
                                            const Document& base,
                                            const Document& left,
                                            const Document& right,
                                            WhitespaceMode ws) {
  if (chunk.kind == ChunkKind::stable) return slice(left, chunk.left);
  if (same(left, chunk.left, right, chunk.right, ws)) return slice(left, chunk.left);
  if (same(left, chunk.left, base, chunk.base, ws)) return slice(right, chunk.right);
  if (same(right, chunk.right, base, chunk.base, ws)) return slice(left, chunk.left);
  return Conflict{slice(base, chunk.base), slice(left, chunk.left),
                  slice(right, chunk.right)};
}

MergeResult resolve(const std::vector<Chunk3>& chunks, const Document& base,
                    const Document& left, const Document& right,
                    WhitespaceMode ws) {
  MergeResult result;
  for (const auto& chunk : chunks) {
    auto outcome = resolve_chunk(chunk, base, left, right, ws);
    if (auto* lines = std::get_if<Lines>(&outcome)) {
      result.append(std::move(*lines));
    } else {
      result.append(std::move(std::get<Conflict>(outcome)));
    }
  }
  return result;
}

MergeResult merge_lines(const Document& base, const Document& left,
                        const Document& right, WhitespaceMode ws) {
  return resolve(chunk3(base, left, right, ws), base, left, right, ws);
}

namespace {

void append_body(std::string& out, const Lines& lines) {
  out += join_lines(lines);
  if (!out.empty() && out.back() != '\n') out += '\n';
}

void append_marker(std::string& out, char c, std::size_t n,
                   const std::string& label) {
  if (!out.empty() && out.back() != '\n') out += '\n';
  out.append(n, c);
  if (!label.empty()) {
    out += ' ';
    out += label;
  }
  out += '\n';
}

}  // namespace

std::string render(const MergeResult& result, const ConflictStyle& style) {
  style.validate();
  std::string out;
  for (const auto& seg : result.segments()) {
    if (const auto* r = std::get_if<Resolved>(&seg)) {
      out += join_lines(r->lines);
      continue;
    }
    const auto& c = std::get<Conflict>(seg);
    const Lines* left = &c.left;
    const Lines* right = &c.right;
    const Lines* base = &c.base;
    Lines zl, zr, zb, suffix;
    if (style.kind == ConflictStyleKind::zdiff3) {
      const std::size_t limit = std::min(c.left.size(), c.right.size());
      std::size_t p = 0;
      while (p < limit && c.left[p] == c.right[p]) ++p;
      std::size_t s = 0;
      while (s < limit - p &&
             c.left[c.left.size() - 1 - s] == c.right[c.right.size() - 1 - s]) {
        ++s;
      }
      out += join_lines(Lines(c.left.begin(), c.left.begin() + static_cast<long>(p)));
      zl.assign(c.left.begin() + static_cast<long>(p),
                c.left.end() - static_cast<long>(s));
      zr.assign(c.right.begin() + static_cast<long>(p),
                c.right.end() - static_cast<long>(s));
      const std::size_t drop_front = std::min(p, c.base.size());
      const std::size_t drop_back = std::min(s, c.base.size() - drop_front);
      zb.assign(c.base.begin() + static_cast<long>(drop_front),
                c.base.end() - static_cast<long>(drop_back));
      suffix.assign(c.left.end() - static_cast<long>(s), c.left.end());
      left = &zl;
      right = &zr;
      base = &zb;
    }
    append_marker(out, '<', style.marker_size, style.left_label);
    append_body(out, *left);
    if (style.kind != ConflictStyleKind::merge) {
      append_marker(out, '|', style.marker_size, style.base_label);
      append_body(out, *base);
    }
    append_marker(out, '=', style.marker_size, {});
    append_body(out, *right);
    append_marker(out, '>', style.marker_size, style.right_label);
    out += join_lines(suffix);
  }
  return out;
}

namespace {

bool is_marker(const std::string& content, char c, std::size_t n) {
  if (content.size() < n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (content[i] != c) return false;
  }
  return content.size() == n || content[n] == ' ';
}

}  // namespace

MergeResult parse_conflicts(std::string_view text, const ConflictStyle& style) {
  style.validate();
  const Document doc = split_lines(text);
  const std::size_t n = style.marker_size;
  enum class State { outside, left, base, right } state = State::outside;
  MergeResult result;
  Lines resolved;
  Conflict current;
  std::size_t opened_at = 0;

  for (std::size_t i = 0; i < doc.lines.size(); ++i) {
    const Line& line = doc.lines[i];
    const std::size_t lineno = i + 1;
    const bool open = is_marker(line.content, '<', n);
    const bool mid = is_marker(line.content, '|', n);
    const bool sep = line.content.size() == n && is_marker(line.content, '=', n);
    const bool close = is_marker(line.content, '>', n);
    switch (state) {
      case State::outside:
        if (open) {
          result.append(std::move(resolved));
          resolved.clear();
          current = Conflict{};
          opened_at = lineno;
          state = State::left;
        } else if (mid || close) {
          throw MalformedConflict(lineno, "conflict marker outside a conflict");
        } else {
          resolved.push_back(line);
        }
        break;
      case State::left:
        if (open) throw MalformedConflict(lineno, "nested conflict marker");
        if (close) throw MalformedConflict(lineno, "conflict closed before '='");
        if (mid) {
          state = State::base;
        } else if (sep) {
          state = State::right;
        } else {
          current.left.push_back(line);
        }
        break;
      case State::base:
        if (open || mid) throw MalformedConflict(lineno, "nested conflict marker");
        if (close) throw MalformedConflict(lineno, "conflict closed before '='");
        if (sep) {
          state = State::right;
        } else {
          current.base.push_back(line);
        }
        break;
      case State::right:
        if (open || mid) throw MalformedConflict(lineno, "nested conflict marker");
        if (close) {
          result.append(std::move(current));
          current = Conflict{};
          state = State::outside;
        } else {
          current.right.push_back(line);
        }
        break;
    }
  }
  if (state != State::outside) {
    throw MalformedConflict(opened_at, "conflict opened here is never closed");
  }
  result.append(std::move(resolved));
  return result;
}

bool has_conflict_markers(std::string_view text, std::size_t marker_size) {
  const Document doc = split_lines(text);
  return std::any_of(doc.lines.begin(), doc.lines.end(), [&](const Line& l) {
    return is_marker(l.content, '<', marker_size);
  });
}

}  // namespace trimerge
