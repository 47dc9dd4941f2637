#include <algorithm>
#include <unordered_set>

#include "trimerge/strategies.hpp"

namespace trimerge {
namespace {

bool is_ws(char c) { return c == ' ' || c == '\t'; }

bool is_ident_start(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
         c == '$' || u >= 0x80;
}

bool is_ident_part(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool is_blank_line(const Line& line) {
  return std::all_of(line.content.begin(), line.content.end(), is_ws);
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  std::size_t pos() const { return pos_; }

  std::size_t skip_ws() {
    const std::size_t start = pos_;
    while (!done() && is_ws(s_[pos_])) ++pos_;
    return pos_ - start;
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  bool eat_word(std::string_view w) {
    if (s_.substr(pos_, w.size()) != w) return false;
    const std::size_t after = pos_ + w.size();
    if (after < s_.size() && is_ident_part(s_[after])) return false;
    pos_ = after;
    return true;
  }
  std::optional<std::string_view> identifier() {
    if (done() || !is_ident_start(s_[pos_])) return std::nullopt;
    const std::size_t start = pos_;
    while (!done() && is_ident_part(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  std::string_view rest() const { return s_.substr(std::min(pos_, s_.size())); }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

bool trailing_comment_only(std::string_view rest) {
  std::size_t i = 0;
  while (i < rest.size() && is_ws(rest[i])) ++i;
  rest.remove_prefix(i);
  if (rest.empty()) return true;
  if (rest.substr(0, 2) == "//") return true;
  if (rest.substr(0, 2) == "/*") {
    const auto close = rest.find("*/", 2);
    if (close == std::string_view::npos) return false;
    return trailing_comment_only(rest.substr(close + 2));
  }
  return false;
}

}  // namespace

std::string ImportStmt::identity() const {
  std::string id = is_static ? "static " : "";
  id += path;
  if (is_wildcard) id += ".*";
  return id;
}

std::optional<ImportStmt> parse_import(std::string_view line) {
  Cursor cur(line);
  cur.skip_ws();
  if (!cur.eat_word("import") || cur.skip_ws() == 0) return std::nullopt;
  ImportStmt stmt;
  stmt.raw = std::string(line);
  if (cur.eat_word("static")) {
    if (cur.skip_ws() == 0) return std::nullopt;
    stmt.is_static = true;
  }
  auto first = cur.identifier();
  if (!first) return std::nullopt;
  stmt.path = std::string(*first);
  std::string_view last = *first;
  while (cur.eat('.')) {
    if (cur.eat('*')) {
      stmt.is_wildcard = true;
      break;
    }
    auto part = cur.identifier();
    if (!part) return std::nullopt;
    stmt.path += '.';
    stmt.path += *part;
    last = *part;
  }
  cur.skip_ws();
  if (!cur.eat(';')) return std::nullopt;
  if (!trailing_comment_only(cur.rest())) return std::nullopt;
  if (!stmt.is_wildcard) stmt.simple_name = std::string(last);
  return stmt;
}

std::vector<std::string> identifier_tokens(std::string_view src) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    const char c = src[i];
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      const auto close = src.find("*/", i + 2);
      i = close == std::string_view::npos ? n : close + 2;
    } else if (src.substr(i, 3) == "\"\"\"") {
      const auto close = src.find("\"\"\"", i + 3);
      i = close == std::string_view::npos ? n : close + 3;
    } else if (c == '"' || c == '\'') {
      ++i;
      while (i < n && src[i] != c && src[i] != '\n') {
        if (src[i] == '\\') ++i;
        ++i;
      }
      ++i;
    } else if (c >= '0' && c <= '9') {
      while (i < n && (is_ident_part(src[i]) || src[i] == '.')) ++i;
    } else if (is_ident_start(c)) {
      const std::size_t start = i;
      while (i < n && is_ident_part(src[i])) ++i;
      tokens.emplace_back(src.substr(start, i - start));
    } else {
      ++i;
    }
  }
  return tokens;
}

namespace {

bool is_import_only(const Conflict& c) {
  bool any_import = false;
  for (const Lines* body : {&c.base, &c.left, &c.right}) {
    for (const auto& line : *body) {
      if (parse_import(line.content)) {
        any_import = true;
      } else if (!is_blank_line(line)) {
        return false;
      }
    }
  }
  return any_import;
}

std::unordered_set<std::string> used_identifiers(
    const std::vector<Segment>& segments) {
  std::string text;
  const auto add = [&](const Lines& lines) {
    for (const auto& line : lines) {
      if (parse_import(line.content)) continue;
      text += line.content;
      text += '\n';
    }
  };
  for (const auto& seg : segments) {
    if (const auto* r = std::get_if<Resolved>(&seg)) {
      add(r->lines);
    } else if (const auto& c = std::get<Conflict>(seg); !is_import_only(c)) {
      add(c.left);
      add(c.right);
    }
  }
  const auto tokens = identifier_tokens(text);
  return {tokens.begin(), tokens.end()};
}

}  // namespace

MergeResult fix_imports(const MergeResult& result, const Document& base,
                        const Document& /*left*/, const Document& /*right*/) {
  const auto used = used_identifiers(result.segments());
  const auto wanted = [&](const ImportStmt& s) {
    return s.is_wildcard || used.count(*s.simple_name) > 0;
  };

  std::unordered_set<std::string> emitted;
  for (const auto& seg : result.segments()) {
    if (const auto* r = std::get_if<Resolved>(&seg)) {
      for (const auto& line : r->lines) {
        if (auto s = parse_import(line.content)) emitted.insert(s->identity());
      }
    }
  }

  // Re-merge conflicts made only of imports: left's imports, then the ones
  // only right has, dropping named imports the merged code never uses.
  std::vector<Segment> segments;
  for (const auto& seg : result.segments()) {
    const auto* c = std::get_if<Conflict>(&seg);
    if (!c || !is_import_only(*c)) {
      segments.push_back(seg);
      continue;
    }
    Lines merged;
    for (const auto& line : c->left) {
      if (is_blank_line(line)) {
        merged.push_back(line);
      } else if (auto s = parse_import(line.content);
                 s && wanted(*s) && emitted.insert(s->identity()).second) {
        merged.push_back(line);
      }
    }
    for (const auto& line : c->right) {
      if (auto s = parse_import(line.content);
          s && wanted(*s) && emitted.insert(s->identity()).second) {
        merged.push_back(line);
      }
    }
    if (!segments.empty()) {
      if (auto* prev = std::get_if<Resolved>(&segments.back())) {
        prev->lines.insert(prev->lines.end(), merged.begin(), merged.end());
        continue;
      }
    }
    segments.push_back(Resolved{std::move(merged)});
  }

  // Restore base imports that the merged code still needs.
  std::unordered_set<std::string> present;
  std::unordered_set<std::string> present_names;
  const auto note = [&](const Lines& lines) {
    for (const auto& line : lines) {
      if (auto s = parse_import(line.content)) {
        present.insert(s->identity());
        if (s->simple_name) present_names.insert(*s->simple_name);
      }
    }
  };
  for (const auto& seg : segments) {
    if (const auto* r = std::get_if<Resolved>(&seg)) {
      note(r->lines);
    } else {
      note(std::get<Conflict>(seg).left);
      note(std::get<Conflict>(seg).right);
    }
  }
  Lines restore;
  for (const auto& line : base.lines) {
    auto s = parse_import(line.content);
    if (!s || s->is_wildcard || !wanted(*s)) continue;
    if (present.count(s->identity()) || present_names.count(*s->simple_name)) {
      continue;
    }
    present.insert(s->identity());
    present_names.insert(*s->simple_name);
    restore.push_back({line.content, line.terminator == Terminator::none
                                         ? Terminator::lf
                                         : line.terminator});
  }

  if (!restore.empty()) {
    // Anchor after the last resolved import, else after `package`, else at
    // the top of the file.
    std::optional<std::pair<std::size_t, std::size_t>> anchor;
    std::optional<std::pair<std::size_t, std::size_t>> package_line;
    for (std::size_t si = 0; si < segments.size(); ++si) {
      const auto* r = std::get_if<Resolved>(&segments[si]);
      if (!r) continue;
      for (std::size_t li = 0; li < r->lines.size(); ++li) {
        const auto& content = r->lines[li].content;
        if (parse_import(content)) {
          anchor = {si, li};
        } else if (!package_line) {
          Cursor cur(content);
          cur.skip_ws();
          if (cur.eat_word("package")) package_line = {si, li};
        }
      }
    }
    if (!anchor) anchor = package_line;
    if (anchor) {
      auto& lines = std::get<Resolved>(segments[anchor->first]).lines;
      Line& at = lines[anchor->second];
      if (at.terminator == Terminator::none) {
        at.terminator = Terminator::lf;
        restore.back().terminator = Terminator::none;
      }
      lines.insert(lines.begin() + static_cast<long>(anchor->second + 1),
                   restore.begin(), restore.end());
    } else {
      segments.insert(segments.begin(), Resolved{std::move(restore)});
    }
  }

  MergeResult out;
  for (auto& seg : segments) out.append(std::move(seg));
  return out;
}

}  // namespace trimerge
