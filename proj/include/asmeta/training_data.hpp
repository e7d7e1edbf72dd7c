#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "asmeta/matrix.hpp"
#include "asmeta/scenario.hpp"

namespace asmeta {

/// What a selector learns from: raw instance features (NaN = missing) and
/// an instance x algorithm cost matrix where lower is better.
///
/// Base-level data holds PR10 values without feature cost; `feature_cost`
/// and `timeout_cost` let callers charge feature computation the same way
/// the metrics module does. Meta-level data already folds feature cost
/// into its costs and leaves `feature_cost` empty.
struct TrainingData {
  Matrix features;
  Matrix costs;
  /// Per-row feature cost; empty means zero.
  std::vector<double> feature_cost;
  /// Cost value that marks an unsolved run (10 * cutoff).
  double timeout_cost = std::numeric_limits<double>::infinity();

  std::size_t size() const { return costs.rows(); }
  std::size_t num_algorithms() const { return costs.cols(); }

  /// Cost of choosing `algorithm` on `row`; feature cost is added to
  /// solved runs only.
  double charged_cost(std::size_t row, std::size_t algorithm, bool charge_features) const;

  /// Mean charged cost of per-row selections.
  double par10(std::span<const std::size_t> selections, bool charge_features) const;

  /// Mean of the row minima.
  double oracle_par10() const;

  /// Column with the lowest mean; ties go to the lower index.
  std::size_t sbs() const;

  /// Normalized score of per-row selections. Throws DegenerateGap when the
  /// SBS does not do worse than the oracle on this data.
  double npar10(std::span<const std::size_t> selections, bool charge_features) const;
  /// True when the SBS is strictly worse than the oracle on this data.
  bool has_gap() const;
};

/// PR10 training data for the given scenario instances (duplicates allowed,
/// as produced by bootstrap samples).
TrainingData make_training_data(const Scenario& scenario, std::span<const std::size_t> rows);

/// Row subset (duplicates allowed).
TrainingData subset(const TrainingData& data, std::span<const std::size_t> rows);

/// Index of the smallest value; ties go to the lowest index.
std::size_t argmin(std::span<const double> values);

/// Per-row argmin of the cost matrix.
std::vector<std::size_t> best_labels(const Matrix& costs);

}  // namespace asmeta
