#include "asmeta/meta_selection.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "asmeta/ensembles.hpp"
#include "asmeta/error.hpp"

namespace asmeta {

MetaBuild build_meta_scenario(const TrainingData& train, std::span<const SelectorFactory> selectors,
                              std::size_t inner_folds, std::uint64_t seed) {
  if (selectors.empty()) throw Error(Errc::EmptyEnsemble, "meta selection needs at least one selector");
  if (inner_folds < 2) throw Error(Errc::InvalidConfig, "meta selection needs at least 2 inner folds");
  const auto n = train.size();
  if (n < inner_folds) throw Error(Errc::DegenerateTraining, "fewer training rows than inner folds");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t p = 0; p < n; ++p) fold_of[order[p]] = p % inner_folds;

  const auto m = selectors.size();
  MetaBuild build;
  auto& meta = build.meta;
  meta.choices.assign(m, std::vector<std::size_t>(n, 0));
  for (std::size_t f = 0; f < inner_folds; ++f) {
    std::vector<std::size_t> fit_rows, query_rows;
    for (std::size_t r = 0; r < n; ++r) (fold_of[r] == f ? query_rows : fit_rows).push_back(r);
    if (fit_rows.size() < 2) {
      throw Error(Errc::DegenerateTraining, "inner fold leaves fewer than 2 training rows");
    }
    const auto fit_data = subset(train, fit_rows);
    for (std::size_t s = 0; s < m; ++s) {
      const auto sel = selectors[s](fit_data, member_seed(seed, s));
      for (auto r : query_rows) meta.choices[s][r] = sel->select(train.features.row(r));
    }
  }

  meta.data.features = train.features;
  meta.data.costs = Matrix(n, m);
  meta.data.timeout_cost = train.timeout_cost;
  for (std::size_t s = 0; s < m; ++s) {
    build.deployed.push_back(selectors[s](train, member_seed(seed, s)));
    const bool charge = build.deployed.back()->needs_features();
    for (std::size_t r = 0; r < n; ++r) meta.data.costs(r, s) = train.charged_cost(r, meta.choices[s][r], charge);
  }
  return build;
}

SelectorSelector::SelectorSelector(SelectorPtr meta, std::vector<SelectorPtr> deployed)
    : meta_(std::move(meta)), deployed_(std::move(deployed)) {
  if (deployed_.empty()) throw Error(Errc::EmptyEnsemble, "selector-selector without base selectors");
}

std::vector<double> SelectorSelector::scores(std::span<const double> features) const {
  const auto& chosen = *deployed_[meta_->select(features)];
  return dummy_scores(chosen.select(features), num_algorithms());
}

bool SelectorSelector::needs_features() const {
  return meta_->needs_features() ||
         std::any_of(deployed_.begin(), deployed_.end(), [](const SelectorPtr& s) { return s->needs_features(); });
}

std::shared_ptr<const SelectorSelector> fit_ass(const MetaBuild& build, const SelectorFactory& meta_learner,
                                                std::uint64_t seed) {
  auto meta = meta_learner(build.meta.data, member_seed(seed, build.deployed.size()));
  return std::make_shared<SelectorSelector>(std::move(meta), build.deployed);
}

std::shared_ptr<const SelectorSelector> fit_ass(const TrainingData& train, std::span<const SelectorFactory> selectors,
                                                const SelectorFactory& meta_learner, std::size_t inner_folds,
                                                std::uint64_t seed) {
  return fit_ass(build_meta_scenario(train, selectors, inner_folds, seed), meta_learner, seed);
}

}  // namespace asmeta
