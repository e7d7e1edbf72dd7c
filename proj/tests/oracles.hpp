#pragma once

// Reference implementations written independently of the library, used to
// cross-check its aggregation and metric code.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "asmeta/aggregation.hpp"

namespace oracle {

/// Midrank as the average 1-based position over every ascending ordering of
/// the scores (tied entries permuted in all ways).
inline std::vector<double> ranks_by_enumeration(const std::vector<double>& scores) {
  const auto k = scores.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> pos_sum(k, 0.0);
  std::size_t valid = 0;
  do {
    bool sorted = true;
    for (std::size_t j = 1; j < k && sorted; ++j) sorted = scores[perm[j - 1]] <= scores[perm[j]];
    if (!sorted) continue;
    ++valid;
    for (std::size_t j = 0; j < k; ++j) pos_sum[perm[j]] += static_cast<double>(j + 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& p : pos_sum) p /= static_cast<double>(valid);
  return pos_sum;
}

/// Candidate with the smallest value; earlier candidates win exact ties.
inline std::size_t lowest_first(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < v.size(); ++a)
    if (v[a] < v[best]) best = a;
  return best;
}

inline std::size_t majority(const std::vector<asmeta::SelectorOutput>& outs, std::size_t k, bool weighted) {
  std::vector<double> neg_votes(k, 0.0);
  for (const auto& o : outs) neg_votes[o.selection] -= weighted ? o.weight : 1.0;
  return lowest_first(neg_votes);
}

inline std::size_t mean(const std::vector<asmeta::SelectorOutput>& outs, std::size_t k) {
  std::vector<double> total(k, 0.0);
  for (const auto& o : outs) {
    const double lo = *std::min_element(o.scores.begin(), o.scores.end());
    const double hi = *std::max_element(o.scores.begin(), o.scores.end());
    for (std::size_t a = 0; a < k; ++a) total[a] += hi > lo ? (o.scores[a] - lo) / (hi - lo) : 0.5;
  }
  return lowest_first(total);
}

inline std::size_t borda(const std::vector<asmeta::SelectorOutput>& outs, std::size_t k) {
  std::vector<double> total(k, 0.0);
  for (const auto& o : outs) {
    const auto r = ranks_by_enumeration(o.scores);
    for (std::size_t a = 0; a < k; ++a) total[a] += r[a];
  }
  return lowest_first(total);
}

}  // namespace oracle
