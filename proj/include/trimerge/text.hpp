#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trimerge {

enum class Terminator { none, lf, crlf };

std::string_view terminator_text(Terminator t) noexcept;

/// One line of a file. `content` never contains a newline, except for the
/// newline sentinels produced by explode_chars().
struct Line {
  std::string content;
  Terminator terminator = Terminator::none;

  std::string text() const;

  friend bool operator==(const Line&, const Line&) = default;
};

using Lines = std::vector<Line>;

/// File contents as a sequence of lines. Joining the lines with their
/// terminators reproduces the original bytes.
struct Document {
  Lines lines;

  bool empty() const noexcept { return lines.empty(); }
  std::size_t size() const noexcept { return lines.size(); }
  bool trailing_newline() const noexcept;
  std::string text() const;

  friend bool operator==(const Document&, const Document&) = default;
};

std::string join_lines(const Lines& lines);

enum class WhitespaceMode { exact, ignore_space_change };

std::string_view to_string(WhitespaceMode mode) noexcept;
std::optional<WhitespaceMode> parse_whitespace_mode(std::string_view name);

class DecodeError : public std::runtime_error {
 public:
  explicit DecodeError(std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class MalformedExplodedForm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Offset of the first byte that does not start a valid UTF-8 sequence.
std::optional<std::size_t> find_invalid_utf8(std::string_view text) noexcept;

/// Splits at LF; a CR immediately before the LF becomes part of a CRLF
/// terminator. Byte-transparent, so invalid UTF-8 is carried through as-is.
Document split_lines(std::string_view text);

/// Same as split_lines() but rejects input that is not valid UTF-8.
Document split_lines_strict(std::string_view text);

/// Comparison key: two lines are equal under `ws` iff their keys are equal.
/// The terminator is part of the key, so "a\n" and "a" at end of file differ.
std::string line_key(const Line& line, WhitespaceMode ws);

inline bool lines_equal(const Line& a, const Line& b, WhitespaceMode ws) {
  return line_key(a, ws) == line_key(b, ws);
}

bool ranges_equal(const Line* a, std::size_t a_len, const Line* b,
                  std::size_t b_len, WhitespaceMode ws);

/// Character explosion: one output line per UTF-8 code point (or per byte
/// where the input is not valid UTF-8). Each terminator becomes a sentinel
/// line that cannot collide with any single-character line.
Document explode_chars(const Document& doc);
Document implode_chars(const Document& exploded);

bool is_newline_sentinel(const Line& line) noexcept;

}  // namespace trimerge
