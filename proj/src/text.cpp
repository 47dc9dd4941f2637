#include "trimerge/text.hpp"

#include <string>

namespace trimerge {
namespace {

constexpr std::string_view kLfSentinel = "\n";
constexpr std::string_view kCrlfSentinel = "\r\n";

bool is_cont(unsigned char c) { return (c & 0xC0) == 0x80; }

// Length of the valid UTF-8 sequence starting at `pos`, or 0 if invalid.
std::size_t utf8_sequence_length(std::string_view s, std::size_t pos) {
  const auto at = [&](std::size_t i) -> unsigned char {
    return static_cast<unsigned char>(s[i]);
  };
  const std::size_t left = s.size() - pos;
  const unsigned char c = at(pos);
  if (c < 0x80) return 1;
  if (c >= 0xC2 && c <= 0xDF) {
    return (left >= 2 && is_cont(at(pos + 1))) ? 2 : 0;
  }
  if (c >= 0xE0 && c <= 0xEF) {
    if (left < 3 || !is_cont(at(pos + 1)) || !is_cont(at(pos + 2))) return 0;
    const unsigned char c1 = at(pos + 1);
    if (c == 0xE0 && c1 < 0xA0) return 0;  // overlong
    if (c == 0xED && c1 > 0x9F) return 0;  // surrogates
    return 3;
  }
  if (c >= 0xF0 && c <= 0xF4) {
    if (left < 4 || !is_cont(at(pos + 1)) || !is_cont(at(pos + 2)) ||
        !is_cont(at(pos + 3))) {
      return 0;
    }
    const unsigned char c1 = at(pos + 1);
    if (c == 0xF0 && c1 < 0x90) return 0;
    if (c == 0xF4 && c1 > 0x8F) return 0;
    return 4;
  }
  return 0;
}

bool is_blank(char c) { return c == ' ' || c == '\t'; }

}  // namespace

std::string_view terminator_text(Terminator t) noexcept {
  switch (t) {
    case Terminator::lf:
      return "\n";
    case Terminator::crlf:
      return "\r\n";
    case Terminator::none:
      break;
  }
  return {};
}

std::string Line::text() const {
  std::string out = content;
  out += terminator_text(terminator);
  return out;
}

bool Document::trailing_newline() const noexcept {
  return !lines.empty() && lines.back().terminator != Terminator::none;
}

std::string join_lines(const Lines& lines) {
  std::size_t bytes = 0;
  for (const auto& l : lines) bytes += l.content.size() + 2;
  std::string out;
  out.reserve(bytes);
  for (const auto& l : lines) {
    out += l.content;
    out += terminator_text(l.terminator);
  }
  return out;
}

std::string Document::text() const { return join_lines(lines); }

std::string_view to_string(WhitespaceMode mode) noexcept {
  return mode == WhitespaceMode::exact ? "exact" : "ignore-space-change";
}

std::optional<WhitespaceMode> parse_whitespace_mode(std::string_view name) {
  if (name == "exact") return WhitespaceMode::exact;
  if (name == "ignore-space-change" || name == "ignore-space") {
    return WhitespaceMode::ignore_space_change;
  }
  return std::nullopt;
}

DecodeError::DecodeError(std::size_t offset)
    : std::runtime_error("invalid UTF-8 at byte offset " +
                         std::to_string(offset)),
      offset_(offset) {}

std::optional<std::size_t> find_invalid_utf8(std::string_view text) noexcept {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t len = utf8_sequence_length(text, pos);
    if (len == 0) return pos;
    pos += len;
  }
  return std::nullopt;
}

Document split_lines(std::string_view text) {
  Document doc;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      doc.lines.push_back({std::string(text.substr(start)), Terminator::none});
      break;
    }
    if (nl > start && text[nl - 1] == '\r') {
      doc.lines.push_back(
          {std::string(text.substr(start, nl - 1 - start)), Terminator::crlf});
    } else {
      doc.lines.push_back(
          {std::string(text.substr(start, nl - start)), Terminator::lf});
    }
    start = nl + 1;
  }
  return doc;
}

Document split_lines_strict(std::string_view text) {
  if (const auto bad = find_invalid_utf8(text)) throw DecodeError(*bad);
  return split_lines(text);
}

std::string line_key(const Line& line, WhitespaceMode ws) {
  std::string key;
  if (ws == WhitespaceMode::exact) {
    key = line.content;
  } else {
    const std::string& c = line.content;
    std::size_t end = c.size();
    while (end > 0 && is_blank(c[end - 1])) --end;
    key.reserve(end);
    bool in_run = false;
    for (std::size_t i = 0; i < end; ++i) {
      if (is_blank(c[i])) {
        if (!in_run) key.push_back(' ');
        in_run = true;
      } else {
        key.push_back(c[i]);
        in_run = false;
      }
    }
  }
  key += terminator_text(line.terminator);
  return key;
}

bool ranges_equal(const Line* a, std::size_t a_len, const Line* b,
                  std::size_t b_len, WhitespaceMode ws) {
  if (a_len != b_len) return false;
  for (std::size_t i = 0; i < a_len; ++i) {
    if (ws == WhitespaceMode::exact) {
      if (a[i].content != b[i].content || a[i].terminator != b[i].terminator) {
        return false;
      }
    } else if (line_key(a[i], ws) != line_key(b[i], ws)) {
      return false;
    }
  }
  return true;
}

bool is_newline_sentinel(const Line& line) noexcept {
  return line.terminator == Terminator::lf &&
         (line.content == kLfSentinel || line.content == kCrlfSentinel);
}

Document explode_chars(const Document& doc) {
  Document out;
  for (const auto& line : doc.lines) {
    const std::string_view c = line.content;
    std::size_t pos = 0;
    while (pos < c.size()) {
      std::size_t len = utf8_sequence_length(c, pos);
      if (len == 0) len = 1;
      out.lines.push_back({std::string(c.substr(pos, len)), Terminator::lf});
      pos += len;
    }
    if (line.terminator == Terminator::lf) {
      out.lines.push_back({std::string(kLfSentinel), Terminator::lf});
    } else if (line.terminator == Terminator::crlf) {
      out.lines.push_back({std::string(kCrlfSentinel), Terminator::lf});
    }
  }
  return out;
}

Document implode_chars(const Document& exploded) {
  Document out;
  std::string pending;
  bool have_pending = false;
  for (std::size_t i = 0; i < exploded.lines.size(); ++i) {
    const Line& line = exploded.lines[i];
    if (line.terminator != Terminator::lf) {
      throw MalformedExplodedForm("exploded line " + std::to_string(i + 1) +
                                  " lacks its newline");
    }
    if (is_newline_sentinel(line)) {
      out.lines.push_back({std::move(pending), line.content == kLfSentinel
                                                   ? Terminator::lf
                                                   : Terminator::crlf});
      pending.clear();
      have_pending = false;
      continue;
    }
    const std::string_view c = line.content;
    const bool one_char =
        c.size() == 1 ||
        (!c.empty() && utf8_sequence_length(c, 0) == c.size());
    if (!one_char) {
      throw MalformedExplodedForm("exploded line " + std::to_string(i + 1) +
                                  " is not a single character");
    }
    pending += c;
    have_pending = true;
  }
  if (have_pending) out.lines.push_back({std::move(pending), Terminator::none});
  return out;
}

}  // namespace trimerge
