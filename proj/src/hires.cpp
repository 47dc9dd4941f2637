#include "trimerge/strategies.hpp"

namespace trimerge {

MergeResult merge_hires(const Document& base, const Document& left,
                        const Document& right, WhitespaceMode ws) {
  MergeResult coarse = merge_lines(base, left, right, ws);
  if (coarse.clean()) return coarse;

  MergeResult out;
  for (const auto& seg : coarse.segments()) {
    const auto* conflict = std::get_if<Conflict>(&seg);
    if (!conflict) {
      out.append(seg);
      continue;
    }
    const Document b = explode_chars(Document{conflict->base});
    const Document l = explode_chars(Document{conflict->left});
    const Document r = explode_chars(Document{conflict->right});
    const MergeResult fine = merge_lines(b, l, r, ws);
    if (fine.clean()) {
      out.append(implode_chars(Document{fine.merged_lines()}).lines);
    } else {
      out.append(seg);
    }
  }
  return out;
}

}  // namespace trimerge
