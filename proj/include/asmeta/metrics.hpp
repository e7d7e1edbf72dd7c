#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "asmeta/scenario.hpp"

namespace asmeta {

struct Choice {
  std::size_t instance = 0;
  std::size_t algorithm = 0;
  double feature_cost = 0.0;

  bool operator==(const Choice&) const = default;
};

/// Per-instance selections of one selector over an instance set.
using SelectionTrace = std::vector<Choice>;

/// PR10 of a single choice: 10*C when the run is unsolved (feature cost is
/// irrelevant then), otherwise runtime plus the charged feature cost.
double pr10(const Scenario& scenario, std::size_t instance, std::size_t algorithm,
            double feature_cost_charged);

/// Mean PR10 over the trace. Throws EmptyInstanceSet.
double par10(const Scenario& scenario, const SelectionTrace& trace);

/// par10 after checking that the trace covers exactly `instances` (in order).
double par10(const Scenario& scenario, std::span<const std::size_t> instances,
             const SelectionTrace& trace);

std::size_t count_timeouts(const Scenario& scenario, const SelectionTrace& trace);

/// Mean over instances of the best PR10, no feature cost.
double oracle_par10(const Scenario& scenario, std::span<const std::size_t> instances);

/// Per-instance best algorithm (lowest PR10, lowest index on ties).
std::size_t best_algorithm(const Scenario& scenario, std::size_t instance);

/// Single best solver on the given instances; ties go to the lower index.
std::size_t sbs(const Scenario& scenario, std::span<const std::size_t> train_instances);

SelectionTrace oracle_trace(const Scenario& scenario, std::span<const std::size_t> instances);

/// Trace choosing `algorithm` everywhere with zero feature cost.
SelectionTrace constant_trace(std::span<const std::size_t> instances, std::size_t algorithm);

/// (par10 - oracle) / (sbs - oracle). Throws DegenerateGap when the gap is
/// zero or negative.
double npar10(double par10_selector, double oracle_par10, double sbs_par10);

/// Mean over instances of the best PR10 among the selectors' choices
/// (with their charged feature costs). All traces must cover the same
/// instances in the same order.
double as_oracle_par10(const Scenario& scenario, std::span<const SelectionTrace> traces);

/// Index of the lowest training PAR10; ties go to the earlier selector.
std::size_t sbas(std::span<const double> train_par10);

struct ScoreReport {
  double par10 = 0.0;
  /// Empty when the oracle/SBS gap is degenerate on the scored instances.
  std::optional<double> npar10;
  std::size_t n_timeouts = 0;
  double oracle_par10 = 0.0;
  double sbs_par10 = 0.0;
  std::size_t sbs_algorithm = 0;
};

/// Scores a trace against the oracle and a given SBS (usually picked on
/// the training instances) evaluated on the trace's instances.
ScoreReport score(const Scenario& scenario, const SelectionTrace& trace, std::size_t sbs_algorithm);

}  // namespace asmeta
