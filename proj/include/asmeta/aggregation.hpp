#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asmeta {

enum class Aggregation { Majority, WeightedMajority, Mean, Borda };

std::string_view to_string(Aggregation agg);
/// Accepts `maj`, `wmaj`, `mean`, `borda`. Throws Error(SpecSyntax).
Aggregation parse_aggregation(std::string_view name);

/// One member's answer for one instance.
struct SelectorOutput {
  std::size_t selection = 0;
  std::vector<double> scores;
  double weight = 1.0;
};

/// Plurality vote with unit weights.
std::size_t agg_majority(std::span<const SelectorOutput> outputs);
/// argmax_a sum_s w_s [s(i) = a].
std::size_t agg_weighted_majority(std::span<const SelectorOutput> outputs);
/// argmin of the mean of per-member min-max normalized scores.
std::size_t agg_mean(std::span<const SelectorOutput> outputs);
/// argmin of the summed midranks.
std::size_t agg_borda(std::span<const SelectorOutput> outputs);

/// Ascending ranks starting at 1; tied values share the mean of the block
/// of ranks they occupy.
std::vector<double> ranks_from_scores(std::span<const double> scores);

/// Maps scores into [0, 1]; a constant vector maps to all 0.5.
std::vector<double> minmax_normalize(std::span<const double> scores);

/// Lower-is-better consensus vector whose argmin (lowest index on ties) is
/// the aggregated selection: negated votes for the majority rules, mean
/// normalized scores, or rank sums. Throws Error(EmptyEnsemble).
std::vector<double> aggregate_scores(Aggregation agg, std::span<const SelectorOutput> outputs);

std::size_t aggregate(Aggregation agg, std::span<const SelectorOutput> outputs);

/// Weighted-majority weight from a member's training nPAR10: 1/max(eps, npar10).
double weight_from_npar10(double npar10, double eps = 1e-6);

}  // namespace asmeta
