#pragma once

// Slow, obviously-correct reference implementations used to check the
// library. Nothing here shares code with src/.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "trimerge/merge.hpp"

namespace oracle {

using Seq = std::vector<std::string>;
using Matching = std::vector<std::pair<std::size_t, std::size_t>>;

/// Insert/delete-only edit distance by the textbook DP.
std::size_t edit_distance(const Seq& a, const Seq& b);

/// Every monotone matching of equal elements with maximum size.
std::vector<Matching> all_max_matchings(const Seq& a, const Seq& b);

/// One maximum matching from a plain LCS table (prefers matching early).
Matching lcs_matching(const Seq& a, const Seq& b);

struct RefSegment {
  bool conflict = false;
  Seq resolved;
  Seq base, left, right;
  bool operator==(const RefSegment&) const = default;
};
using RefResult = std::vector<RefSegment>;

/// diff3 over given base->left and base->right matchings, with the
/// four-case resolution rule. Resolved runs are coalesced, empty ones
/// dropped.
RefResult diff3_reference(const Seq& o, const Seq& a, const Seq& b,
                          const Matching& ma, const Matching& mb);

/// Results of diff3_reference over every pair of maximum matchings.
std::vector<RefResult> reference_merges(const Seq& o, const Seq& a, const Seq& b);

/// Whole-line texts ("x\n") of a document, and back.
Seq to_seq(const trimerge::Document& d);
trimerge::Document from_seq(const Seq& s);
RefResult from_result(const trimerge::MergeResult& r);

/// Matching implied by an edit script (pairs of kept lines).
Matching script_matching(const trimerge::EditScript& s);

/// Every sequence over `alphabet` with length <= max_len.
std::vector<Seq> all_sequences(const Seq& alphabet, std::size_t max_len);

/// Characters of a string, one element each (bytes; ASCII test data only).
Seq chars_of(const std::string& s);
std::string concat(const Seq& s);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Random line sequence of length <= max_len drawn from `pool`.
Seq random_seq(Rng& rng, const Seq& pool, std::size_t max_len);

/// `base` with a few random line edits (replace, insert, delete).
Seq mutate(Rng& rng, const Seq& base, const Seq& pool, std::size_t edits);

}  // namespace oracle
