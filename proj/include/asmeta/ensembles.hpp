#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "asmeta/aggregation.hpp"
#include "asmeta/learners.hpp"
#include "asmeta/selectors.hpp"

namespace asmeta {

enum class EnsembleKind { Voting, Bagging, Boosting, Stacking };

/// Common surface of every ensemble: it is a selector itself, and it can
/// report what each member said about an instance.
class Ensemble : public Selector {
 public:
  virtual EnsembleKind kind() const = 0;
  virtual std::vector<SelectorOutput> member_outputs(std::span<const double> features) const = 0;
  virtual std::size_t num_members() const = 0;
};

/// Members combined by a fixed aggregation (voting, bagging, boosting).
class AggregatingEnsemble final : public Ensemble {
 public:
  AggregatingEnsemble(EnsembleKind kind, std::vector<SelectorPtr> members, Aggregation aggregation,
                      std::vector<double> weights);

  std::vector<double> scores(std::span<const double> features) const override;
  std::vector<SelectorOutput> member_outputs(std::span<const double> features) const override;
  bool needs_features() const override;
  std::size_t num_algorithms() const override { return members_.front()->num_algorithms(); }
  EnsembleKind kind() const override { return kind_; }
  std::size_t num_members() const override { return members_.size(); }

  const std::vector<SelectorPtr>& members() const { return members_; }
  const std::vector<double>& weights() const { return weights_; }
  Aggregation aggregation() const { return aggregation_; }

 private:
  EnsembleKind kind_;
  std::vector<SelectorPtr> members_;
  Aggregation aggregation_;
  std::vector<double> weights_;
};

/// Selections of a trained selector on every row of `data`.
std::vector<std::size_t> select_all(const Selector& selector, const TrainingData& data);

/// Seed handed to the j-th member of an ensemble trained with `seed`.
std::uint64_t member_seed(std::uint64_t seed, std::size_t j);

// ---------------------------------------------------------------------------
// Voting

enum class CompositionSearch { AllMembers, Exhaustive };

/// Largest selector pool the exhaustive composition search accepts.
inline constexpr std::size_t kMaxExhaustiveMembers = 15;

struct CompositionSearchResult {
  struct Entry {
    std::uint32_t mask = 0;  // bit j set = member j included
    double train_par10 = 0.0;
    /// Absent when the training oracle and SBS coincide.
    std::optional<double> train_npar10;
  };
  std::vector<Entry> evaluated;
  std::uint32_t best = 0;
};

/// Tie-break between compositions of equal score: fewer members first,
/// then lexicographic order of the sorted member index lists.
bool composition_before(std::uint32_t a, std::uint32_t b);

/// Scores every non-empty subset of already-computed member outputs on the
/// training data and returns all of them with the best mask. Ranking uses
/// training PAR10, which orders compositions exactly as training nPAR10
/// does and stays defined when the oracle/SBS gap is zero.
/// `outputs[j][r]` is member j's output on training row r.
CompositionSearchResult search_compositions(const TrainingData& data,
                                            const std::vector<std::vector<SelectorOutput>>& outputs,
                                            const std::vector<bool>& charge_features, Aggregation aggregation);

struct VotingModel {
  std::shared_ptr<const AggregatingEnsemble> ensemble;
  std::optional<CompositionSearchResult> search;
};

/// Trains every member once on the full data; optionally keeps the subset
/// with the best training nPAR10.
VotingModel fit_voting(const TrainingData& data, std::span<const SelectorFactory> members,
                       Aggregation aggregation, CompositionSearch search, std::uint64_t seed);

/// Weighted-majority weights from the members' training nPAR10; uniform
/// when the training oracle/SBS gap is zero.
std::vector<double> npar10_weights(const TrainingData& data, std::span<const SelectorPtr> members);

// ---------------------------------------------------------------------------
// Bagging

/// N draws with replacement from [0, n).
std::vector<std::size_t> bootstrap_sample(std::size_t n, std::mt19937_64& rng);

/// k members, each trained on an instance-level bootstrap of the data.
std::shared_ptr<const AggregatingEnsemble> fit_bagging(const TrainingData& data, const SelectorFactory& member,
                                                       std::size_t k_members, Aggregation aggregation,
                                                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Boosting (SAMME with weighting by resampling)

/// ln((1 - err) / err) + ln(K - 1).
double samme_alpha(double error, std::size_t n_classes);

/// w_i <- w_i * exp(alpha * miss_i), renormalized to sum to one.
std::vector<double> samme_update(std::span<const double> weights, std::span<const bool> missed, double alpha);

/// Alpha used when a member makes no weighted error.
inline const double kPerfectMemberAlpha = std::log(1e12);

struct BoostingModel {
  std::shared_ptr<const AggregatingEnsemble> ensemble;
  std::vector<double> alphas;
  std::vector<double> errors;
  /// Instance weights before the first round and after every accepted round.
  std::vector<std::vector<double>> weight_history;
  std::size_t attempts = 0;
};

/// Throws InvalidConfig for fewer than 2 algorithms and BoostingCollapsed
/// when no attempt within 3 * n_iterations beats random guessing.
BoostingModel fit_boosting(const TrainingData& data, const SelectorFactory& member, std::size_t n_iterations,
                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// Stacking

struct StackingOptions {
  /// Variance-threshold selection on the standardized augmented features.
  std::optional<double> variance_threshold;
  /// Fraction of rows for the base selectors; the rest train the
  /// meta-learner. Empty means both use all rows.
  std::optional<double> disjoint_ratio;
  /// Drop the base-prediction columns (ablation).
  bool use_base_predictions = true;
};

class StackingEnsemble final : public Ensemble {
 public:
  StackingEnsemble(std::vector<SelectorPtr> bases, SelectorPtr meta, std::optional<learn::Preprocessor> pre,
                   std::optional<learn::VarianceThreshold> selection, bool use_base_predictions);

  /// [f(i); scores of base 1; ...; scores of base m] (before selection).
  std::vector<double> augment(std::span<const double> features) const;
  /// What the meta-learner sees.
  std::vector<double> meta_features(std::span<const double> features) const;

  std::vector<double> scores(std::span<const double> features) const override;
  std::vector<SelectorOutput> member_outputs(std::span<const double> features) const override;
  bool needs_features() const override { return true; }
  std::size_t num_algorithms() const override { return bases_.front()->num_algorithms(); }
  EnsembleKind kind() const override { return EnsembleKind::Stacking; }
  std::size_t num_members() const override { return bases_.size(); }

  const Selector& meta() const { return *meta_; }
  const std::optional<learn::VarianceThreshold>& selection() const { return selection_; }

 private:
  std::vector<SelectorPtr> bases_;
  SelectorPtr meta_;
  std::optional<learn::Preprocessor> pre_;
  std::optional<learn::VarianceThreshold> selection_;
  bool use_base_predictions_;
};

std::shared_ptr<const StackingEnsemble> fit_stacking(const TrainingData& data, std::span<const SelectorFactory> bases,
                                                     const SelectorFactory& meta, const StackingOptions& options,
                                                     std::uint64_t seed);

}  // namespace asmeta
