#include "asmeta/aggregation.hpp"

#include <algorithm>
#include <numeric>

#include "asmeta/error.hpp"
#include "asmeta/selectors.hpp"

namespace asmeta {

std::string_view to_string(Aggregation agg) {
  switch (agg) {
    case Aggregation::Majority: return "maj";
    case Aggregation::WeightedMajority: return "wmaj";
    case Aggregation::Mean: return "mean";
    case Aggregation::Borda: return "borda";
  }
  return "?";
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "maj") return Aggregation::Majority;
  if (name == "wmaj") return Aggregation::WeightedMajority;
  if (name == "mean") return Aggregation::Mean;
  if (name == "borda") return Aggregation::Borda;
  throw Error(Errc::SpecSyntax, "unknown aggregation '" + std::string(name) + "'");
}

namespace {

std::size_t width(std::span<const SelectorOutput> outputs) {
  if (outputs.empty()) throw Error(Errc::EmptyEnsemble, "aggregation over zero members");
  const auto k = outputs.front().scores.size();
  for (const auto& o : outputs) {
    if (o.scores.size() != k || o.selection >= k) {
      throw Error(Errc::UnknownAlgorithm, "member outputs disagree on the algorithm set");
    }
  }
  return k;
}

std::vector<double> vote_scores(std::span<const SelectorOutput> outputs, bool weighted) {
  std::vector<double> votes(width(outputs), 0.0);
  for (const auto& o : outputs) votes[o.selection] -= weighted ? o.weight : 1.0;
  return votes;
}

}  // namespace

std::vector<double> ranks_from_scores(std::span<const double> scores) {
  const auto n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> ranks(n);
  for (std::size_t start = 0; start < n;) {
    auto end = start + 1;
    while (end < n && scores[order[end]] == scores[order[start]]) ++end;
    // positions start..end-1 hold ranks start+1..end
    const double mid = 0.5 * static_cast<double>(start + 1 + end);
    for (auto p = start; p < end; ++p) ranks[order[p]] = mid;
    start = end;
  }
  return ranks;
}

std::vector<double> minmax_normalize(std::span<const double> scores) {
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size(), 0.5);
  if (scores.empty() || !(*hi > *lo)) return out;
  for (std::size_t a = 0; a < scores.size(); ++a) out[a] = (scores[a] - *lo) / (*hi - *lo);
  return out;
}

std::vector<double> aggregate_scores(Aggregation agg, std::span<const SelectorOutput> outputs) {
  const auto k = width(outputs);
  switch (agg) {
    case Aggregation::Majority: return vote_scores(outputs, false);
    case Aggregation::WeightedMajority: return vote_scores(outputs, true);
    case Aggregation::Mean: {
      std::vector<double> mean(k, 0.0);
      for (const auto& o : outputs) {
        const auto norm = minmax_normalize(o.scores);
        for (std::size_t a = 0; a < k; ++a) mean[a] += norm[a];
      }
      for (auto& m : mean) m /= static_cast<double>(outputs.size());
      return mean;
    }
    case Aggregation::Borda: {
      std::vector<double> sum(k, 0.0);
      for (const auto& o : outputs) {
        const auto ranks = ranks_from_scores(o.scores);
        for (std::size_t a = 0; a < k; ++a) sum[a] += ranks[a];
      }
      return sum;
    }
  }
  return {};
}

std::size_t aggregate(Aggregation agg, std::span<const SelectorOutput> outputs) {
  return argmin(aggregate_scores(agg, outputs));
}

std::size_t agg_majority(std::span<const SelectorOutput> outputs) {
  return aggregate(Aggregation::Majority, outputs);
}
std::size_t agg_weighted_majority(std::span<const SelectorOutput> outputs) {
  return aggregate(Aggregation::WeightedMajority, outputs);
}
std::size_t agg_mean(std::span<const SelectorOutput> outputs) { return aggregate(Aggregation::Mean, outputs); }
std::size_t agg_borda(std::span<const SelectorOutput> outputs) { return aggregate(Aggregation::Borda, outputs); }

double weight_from_npar10(double npar10, double eps) { return 1.0 / std::max(eps, npar10); }

}  // namespace asmeta
