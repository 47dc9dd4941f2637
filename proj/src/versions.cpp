#include <algorithm>
#include <charconv>

#include "trimerge/strategies.hpp"

namespace trimerge {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_suffix_char(char c) {
  return is_digit(c) || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         c == '-' || c == '.' || c == '_';
}

std::size_t digit_run(std::string_view s, std::size_t i) {
  while (i < s.size() && is_digit(s[i])) ++i;
  return i;
}

}  // namespace

std::optional<VersionToken> find_version(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size()) {
    if (!is_digit(line[i])) {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    std::vector<std::uint64_t> components;
    bool overflow = false;
    std::size_t j = begin;
    while (true) {
      const std::size_t stop = digit_run(line, j);
      std::uint64_t value = 0;
      const auto [ptr, ec] =
          std::from_chars(line.data() + j, line.data() + stop, value);
      (void)ptr;
      if (ec != std::errc{}) overflow = true;
      components.push_back(value);
      j = stop;
      if (j + 1 < line.size() && line[j] == '.' && is_digit(line[j + 1])) {
        ++j;
        continue;
      }
      break;
    }
    if (components.size() < 2 || overflow) {
      i = j;
      continue;
    }
    VersionToken tok;
    tok.numeric = std::string(line.substr(begin, j - begin));
    tok.components = std::move(components);
    std::size_t k = j;
    while (k < line.size() && is_suffix_char(line[k])) ++k;
    tok.suffix = std::string(line.substr(j, k - j));
    tok.begin = begin;
    tok.end = k;
    return tok;
  }
  return std::nullopt;
}

int compare_versions(const VersionToken& a, const VersionToken& b) {
  const std::size_t n = std::max(a.components.size(), b.components.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t x = i < a.components.size() ? a.components[i] : 0;
    const std::uint64_t y = i < b.components.size() ? b.components[i] : 0;
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

namespace {

struct VersionedLine {
  const Line* line;
  VersionToken token;
};

std::optional<VersionedLine> versioned(const Lines& body) {
  if (body.size() != 1) return std::nullopt;
  auto tok = find_version(body.front().content);
  if (!tok) return std::nullopt;
  return VersionedLine{&body.front(), std::move(*tok)};
}

bool same_frame(const VersionedLine& a, const VersionedLine& b) {
  const std::string_view x = a.line->content;
  const std::string_view y = b.line->content;
  return a.line->terminator == b.line->terminator &&
         x.substr(0, a.token.begin) == y.substr(0, b.token.begin) &&
         x.substr(a.token.end) == y.substr(b.token.end);
}

std::optional<Line> pick_version(const Conflict& c) {
  auto base = versioned(c.base);
  auto left = versioned(c.left);
  auto right = versioned(c.right);
  if (!base || !left || !right) return std::nullopt;
  if (!same_frame(*base, *left) || !same_frame(*base, *right)) return std::nullopt;
  if (compare_versions(left->token, base->token) <= 0 ||
      compare_versions(right->token, base->token) <= 0) {
    return std::nullopt;
  }
  const int order = compare_versions(left->token, right->token);
  if (order == 0) return std::nullopt;
  return order > 0 ? *left->line : *right->line;
}

}  // namespace

MergeResult fix_versions(const MergeResult& result) {
  MergeResult out;
  for (const auto& seg : result.segments()) {
    if (const auto* c = std::get_if<Conflict>(&seg)) {
      if (auto line = pick_version(*c)) {
        out.append(Lines{std::move(*line)});
        continue;
      }
    }
    out.append(seg);
  }
  return out;
}

}  // namespace trimerge
