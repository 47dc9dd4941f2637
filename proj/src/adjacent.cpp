#include "trimerge/strategies.hpp"

namespace trimerge {

MergeResult merge_adjacent(const Document& base, const Document& left,
                           const Document& right, std::size_t cutoff,
                           WhitespaceMode ws) {
  MergeResult out;
  for (const auto& chunk : chunk3(base, left, right, ws)) {
    auto coarse = resolve_chunk(chunk, base, left, right, ws);
    if (auto* lines = std::get_if<Lines>(&coarse)) {
      out.append(std::move(*lines));
      continue;
    }
    const auto pieces = refine_chunk3(chunk, base, left, right, cutoff, ws);
    Lines spliced;
    bool resolved = pieces.has_value();
    if (resolved) {
      for (const auto& piece : *pieces) {
        auto fine = resolve_chunk(piece, base, left, right, ws);
        auto* lines = std::get_if<Lines>(&fine);
        if (!lines) {
          resolved = false;
          break;
        }
        spliced.insert(spliced.end(), lines->begin(), lines->end());
      }
    }
    if (resolved) {
      out.append(std::move(spliced));
    } else {
      out.append(std::move(std::get<Conflict>(coarse)));
    }
  }
  return out;
}

}  // namespace trimerge
