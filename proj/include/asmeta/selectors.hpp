#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "asmeta/learners.hpp"
#include "asmeta/matrix.hpp"
#include "asmeta/scenario.hpp"
#include "asmeta/training_data.hpp"

namespace asmeta {

/// A trained algorithm selector. scores() returns one value per algorithm
/// (lower is better) and select() is always argmin of scores().
class Selector {
 public:
  virtual ~Selector() = default;

  virtual std::vector<double> scores(std::span<const double> features) const = 0;
  std::size_t select(std::span<const double> features) const { return argmin(scores(features)); }

  /// False only for selectors that ignore instance features (no feature cost).
  virtual bool needs_features() const { return true; }
  virtual std::size_t num_algorithms() const = 0;
};

using SelectorPtr = std::shared_ptr<const Selector>;

/// Trains a selector on data with a seed. Everything that composes
/// selectors (ensembles, meta selection, the harness) works on factories.
using SelectorFactory = std::function<SelectorPtr(const TrainingData&, std::uint64_t seed)>;

/// 0 at the selected algorithm and 1 elsewhere.
std::vector<double> dummy_scores(std::size_t selection, std::size_t n_algorithms);

struct ForestSelectorParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 0;
};

/// One regression forest per algorithm predicting its cost.
SelectorPtr fit_peralgo(const TrainingData& data, std::uint64_t seed, const ForestSelectorParams& params = {});

/// Classification forest on the per-instance best algorithm;
/// scores are 1 - predicted class probability.
SelectorPtr fit_multiclass(const TrainingData& data, std::uint64_t seed, const ForestSelectorParams& params = {});

/// Cost-sensitive classifier per algorithm pair, weighted by the cost gap;
/// scores are n_algorithms - votes won.
SelectorPtr fit_pairwise(const TrainingData& data, std::uint64_t seed, const ForestSelectorParams& params = {});

/// Mean cost over the k nearest training instances (standardized features).
SelectorPtr fit_sunny(const TrainingData& data, std::size_t k = 16);

struct IsacParams {
  /// 0 selects min(10, max(2, floor(sqrt(n / 2)))).
  std::size_t k_clusters = 0;
  /// Fail-safe threshold is mean + sd_multiplier * sd of the training
  /// point-to-centroid distances.
  double sd_multiplier = 1.0;
};

/// k-means over standardized features; cluster-mean costs inside the
/// distance threshold, training SBS outside it.
SelectorPtr fit_isac(const TrainingData& data, std::uint64_t seed, const IsacParams& params = {});

/// Constant selector: the training single best solver. Needs no features.
SelectorPtr fit_sbs(const TrainingData& data);

std::size_t default_isac_clusters(std::size_t n_train);

}  // namespace asmeta
