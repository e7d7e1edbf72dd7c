#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "asmeta/selectors.hpp"

namespace asmeta {

/// A selection problem whose "algorithms" are algorithm selectors.
/// costs(r, s) is the cost of selector s's out-of-sample choice on training
/// row r, feature cost included; features are the original instance
/// features.
struct MetaScenario {
  TrainingData data;
  /// choices[s][r]: algorithm picked by selector s for row r out of sample.
  std::vector<std::vector<std::size_t>> choices;
};

struct MetaBuild {
  MetaScenario meta;
  /// Every base selector refit on all training rows.
  std::vector<SelectorPtr> deployed;
};

/// Fits every selector on the complement of each inner fold and records its
/// choices on the fold. Rows are shuffled with `seed` and dealt round-robin
/// into `inner_folds` folds. Throws DegenerateTraining when an inner fold
/// leaves fewer than 2 rows to train on.
MetaBuild build_meta_scenario(const TrainingData& train, std::span<const SelectorFactory> selectors,
                              std::size_t inner_folds, std::uint64_t seed);

/// Selector that asks the meta-learner which base selector to trust and
/// returns that selector's choice as dummy scores.
class SelectorSelector final : public Selector {
 public:
  SelectorSelector(SelectorPtr meta, std::vector<SelectorPtr> deployed);

  std::vector<double> scores(std::span<const double> features) const override;
  bool needs_features() const override;
  std::size_t num_algorithms() const override { return deployed_.front()->num_algorithms(); }

  /// Index of the base selector the meta-learner picks.
  std::size_t choose_selector(std::span<const double> features) const { return meta_->select(features); }
  const std::vector<SelectorPtr>& deployed() const { return deployed_; }

 private:
  SelectorPtr meta_;
  std::vector<SelectorPtr> deployed_;
};

std::shared_ptr<const SelectorSelector> fit_ass(const MetaBuild& build, const SelectorFactory& meta_learner,
                                                std::uint64_t seed);

/// Builds the meta scenario and trains the selector-selector in one go.
std::shared_ptr<const SelectorSelector> fit_ass(const TrainingData& train, std::span<const SelectorFactory> selectors,
                                                const SelectorFactory& meta_learner, std::size_t inner_folds,
                                                std::uint64_t seed);

}  // namespace asmeta
