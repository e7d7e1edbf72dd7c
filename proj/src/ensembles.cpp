#include "asmeta/ensembles.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "asmeta/error.hpp"

namespace asmeta {

AggregatingEnsemble::AggregatingEnsemble(EnsembleKind kind, std::vector<SelectorPtr> members,
                                         Aggregation aggregation, std::vector<double> weights)
    : kind_(kind), members_(std::move(members)), aggregation_(aggregation), weights_(std::move(weights)) {
  if (members_.empty()) throw Error(Errc::EmptyEnsemble, "ensemble without members");
  if (weights_.empty()) weights_.assign(members_.size(), 1.0);
  if (weights_.size() != members_.size()) throw Error(Errc::InvalidConfig, "one weight per member expected");
}

std::vector<SelectorOutput> AggregatingEnsemble::member_outputs(std::span<const double> features) const {
  std::vector<SelectorOutput> out;
  out.reserve(members_.size());
  for (std::size_t j = 0; j < members_.size(); ++j) {
    auto s = members_[j]->scores(features);
    const auto sel = argmin(s);
    out.push_back({sel, std::move(s), weights_[j]});
  }
  return out;
}

std::vector<double> AggregatingEnsemble::scores(std::span<const double> features) const {
  return aggregate_scores(aggregation_, member_outputs(features));
}

bool AggregatingEnsemble::needs_features() const {
  return std::any_of(members_.begin(), members_.end(), [](const SelectorPtr& m) { return m->needs_features(); });
}

std::vector<std::size_t> select_all(const Selector& selector, const TrainingData& data) {
  std::vector<std::size_t> out(data.size());
  for (std::size_t r = 0; r < data.size(); ++r) out[r] = selector.select(data.features.row(r));
  return out;
}

std::uint64_t member_seed(std::uint64_t seed, std::size_t j) { return seed + 7919ULL * j; }

std::vector<double> npar10_weights(const TrainingData& data, std::span<const SelectorPtr> members) {
  std::vector<double> w;
  w.reserve(members.size());
  if (!data.has_gap()) return std::vector<double>(members.size(), 1.0);
  for (const auto& m : members) {
    w.push_back(weight_from_npar10(data.npar10(select_all(*m, data), m->needs_features())));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Voting

bool composition_before(std::uint32_t a, std::uint32_t b) {
  const auto pa = std::popcount(a);
  const auto pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  // sorted index lists compare lexicographically: the first differing bit
  // decides, and the list holding it is smaller
  const auto diff = a ^ b;
  if (diff == 0) return false;
  const auto low = diff & (~diff + 1);
  return (a & low) != 0;
}

CompositionSearchResult search_compositions(const TrainingData& data,
                                            const std::vector<std::vector<SelectorOutput>>& outputs,
                                            const std::vector<bool>& charge_features, Aggregation aggregation) {
  const auto m = outputs.size();
  if (m == 0) throw Error(Errc::EmptyEnsemble, "composition search over zero members");
  if (m > kMaxExhaustiveMembers) {
    throw Error(Errc::InvalidConfig, "exhaustive composition search is limited to " +
                                         std::to_string(kMaxExhaustiveMembers) + " members");
  }
  CompositionSearchResult result;
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;
  result.evaluated.reserve(full);
  std::vector<SelectorOutput> picked;
  std::vector<std::size_t> selections(data.size());
  bool have_best = false;
  double best_score = 0.0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    bool charge = false;
    for (std::size_t j = 0; j < m; ++j) charge = charge || (((mask >> j) & 1U) && charge_features[j]);
    for (std::size_t r = 0; r < data.size(); ++r) {
      picked.clear();
      for (std::size_t j = 0; j < m; ++j) {
        if ((mask >> j) & 1U) picked.push_back(outputs[j][r]);
      }
      selections[r] = aggregate(aggregation, picked);
    }
    const double score = data.par10(selections, charge);
    std::optional<double> normalized;
    if (data.has_gap()) normalized = data.npar10(selections, charge);
    result.evaluated.push_back({mask, score, normalized});
    if (!have_best || score < best_score || (score == best_score && composition_before(mask, result.best))) {
      have_best = true;
      best_score = score;
      result.best = mask;
    }
  }
  return result;
}

VotingModel fit_voting(const TrainingData& data, std::span<const SelectorFactory> factories,
                       Aggregation aggregation, CompositionSearch search, std::uint64_t seed) {
  if (factories.empty()) throw Error(Errc::EmptyEnsemble, "voting needs at least one selector");
  std::vector<SelectorPtr> members;
  for (std::size_t j = 0; j < factories.size(); ++j) members.push_back(factories[j](data, member_seed(seed, j)));
  std::vector<double> weights(members.size(), 1.0);
  if (aggregation == Aggregation::WeightedMajority) weights = npar10_weights(data, members);

  VotingModel model;
  if (search == CompositionSearch::Exhaustive) {
    std::vector<std::vector<SelectorOutput>> outputs(members.size());
    std::vector<bool> charge(members.size());
    for (std::size_t j = 0; j < members.size(); ++j) {
      charge[j] = members[j]->needs_features();
      outputs[j].reserve(data.size());
      for (std::size_t r = 0; r < data.size(); ++r) {
        auto s = members[j]->scores(data.features.row(r));
        const auto sel = argmin(s);
        outputs[j].push_back({sel, std::move(s), weights[j]});
      }
    }
    model.search = search_compositions(data, outputs, charge, aggregation);
    std::vector<SelectorPtr> kept;
    std::vector<double> kept_weights;
    for (std::size_t j = 0; j < members.size(); ++j) {
      if ((model.search->best >> j) & 1U) {
        kept.push_back(members[j]);
        kept_weights.push_back(weights[j]);
      }
    }
    members = std::move(kept);
    weights = std::move(kept_weights);
  }
  model.ensemble = std::make_shared<AggregatingEnsemble>(EnsembleKind::Voting, std::move(members), aggregation,
                                                         std::move(weights));
  return model;
}

// ---------------------------------------------------------------------------
// Bagging

std::vector<std::size_t> bootstrap_sample(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> sample(n);
  for (auto& s : sample) s = pick(rng);
  return sample;
}

namespace {

std::size_t distinct(const std::vector<std::size_t>& v) { return std::set<std::size_t>(v.begin(), v.end()).size(); }

}  // namespace

std::shared_ptr<const AggregatingEnsemble> fit_bagging(const TrainingData& data, const SelectorFactory& factory,
                                                       std::size_t k_members, Aggregation aggregation,
                                                       std::uint64_t seed) {
  if (k_members == 0) throw Error(Errc::InvalidConfig, "bagging needs k >= 1");
  if (data.size() == 0) throw Error(Errc::DegenerateTraining, "bagging over empty training data");
  std::mt19937_64 rng(seed);
  std::vector<SelectorPtr> members;
  for (std::size_t m = 0; m < k_members; ++m) {
    auto sample = bootstrap_sample(data.size(), rng);
    for (int retry = 0; retry < 10 && distinct(sample) < 2; ++retry) sample = bootstrap_sample(data.size(), rng);
    if (distinct(sample) < 2) {
      throw Error(Errc::DegenerateTraining, "bootstrap samples keep collapsing to fewer than 2 instances");
    }
    members.push_back(factory(subset(data, sample), member_seed(seed, m)));
  }
  std::vector<double> weights(members.size(), 1.0);
  if (aggregation == Aggregation::WeightedMajority) weights = npar10_weights(data, members);
  return std::make_shared<AggregatingEnsemble>(EnsembleKind::Bagging, std::move(members), aggregation,
                                               std::move(weights));
}

// ---------------------------------------------------------------------------
// Boosting

double samme_alpha(double error, std::size_t n_classes) {
  return std::log((1.0 - error) / error) + std::log(static_cast<double>(n_classes) - 1.0);
}

std::vector<double> samme_update(std::span<const double> weights, std::span<const bool> missed, double alpha) {
  std::vector<double> out(weights.begin(), weights.end());
  const double boost = std::exp(alpha);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (missed[i]) out[i] *= boost;
  }
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (auto& w : out) w /= total;
  return out;
}

BoostingModel fit_boosting(const TrainingData& data, const SelectorFactory& factory, std::size_t n_iterations,
                           std::uint64_t seed) {
  const auto k = data.num_algorithms();
  const auto n = data.size();
  if (k < 2) throw Error(Errc::InvalidConfig, "boosting needs at least 2 algorithms");
  if (n_iterations == 0) throw Error(Errc::InvalidConfig, "boosting needs at least 1 iteration");
  if (n < 2) throw Error(Errc::DegenerateTraining, "boosting needs at least 2 training instances");

  const auto labels = best_labels(data.costs);
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  BoostingModel model;
  model.weight_history.push_back(w);
  std::vector<SelectorPtr> members;
  std::mt19937_64 rng(seed);
  const double chance = 1.0 - 1.0 / static_cast<double>(k);

  while (members.size() < n_iterations && model.attempts < 3 * n_iterations) {
    const auto attempt = model.attempts++;
    std::discrete_distribution<std::size_t> draw(w.begin(), w.end());
    std::vector<std::size_t> sample(n);
    for (auto& s : sample) s = draw(rng);
    if (distinct(sample) < 2) continue;

    auto member = factory(subset(data, sample), member_seed(seed, attempt));
    const auto preds = select_all(*member, data);
    auto missed = std::make_unique<bool[]>(n);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      missed[i] = preds[i] != labels[i];
      if (missed[i]) err += w[i];
    }
    if (err >= chance) continue;
    members.push_back(std::move(member));
    model.errors.push_back(err);
    if (err <= 0.0) {
      model.alphas.push_back(kPerfectMemberAlpha);
      break;
    }
    const double alpha = samme_alpha(err, k);
    model.alphas.push_back(alpha);
    w = samme_update(w, {missed.get(), n}, alpha);
    model.weight_history.push_back(w);
  }
  if (members.empty()) {
    throw Error(Errc::BoostingCollapsed, "no member beat chance level within " +
                                             std::to_string(3 * n_iterations) + " attempts");
  }
  model.ensemble = std::make_shared<AggregatingEnsemble>(EnsembleKind::Boosting, std::move(members),
                                                         Aggregation::WeightedMajority, model.alphas);
  return model;
}

// ---------------------------------------------------------------------------
// Stacking

StackingEnsemble::StackingEnsemble(std::vector<SelectorPtr> bases, SelectorPtr meta,
                                   std::optional<learn::Preprocessor> pre,
                                   std::optional<learn::VarianceThreshold> selection, bool use_base_predictions)
    : bases_(std::move(bases)),
      meta_(std::move(meta)),
      pre_(std::move(pre)),
      selection_(std::move(selection)),
      use_base_predictions_(use_base_predictions) {
  if (bases_.empty()) throw Error(Errc::EmptyEnsemble, "stacking without base selectors");
}

std::vector<double> StackingEnsemble::augment(std::span<const double> features) const {
  std::vector<double> out(features.begin(), features.end());
  for (const auto& b : bases_) {
    const auto s = b->scores(features);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

std::vector<double> StackingEnsemble::meta_features(std::span<const double> features) const {
  auto x = use_base_predictions_ ? augment(features) : std::vector<double>(features.begin(), features.end());
  if (pre_) x = pre_->transform(x);
  if (selection_) x = selection_->apply(x);
  return x;
}

std::vector<double> StackingEnsemble::scores(std::span<const double> features) const {
  return meta_->scores(meta_features(features));
}

std::vector<SelectorOutput> StackingEnsemble::member_outputs(std::span<const double> features) const {
  std::vector<SelectorOutput> out;
  for (const auto& b : bases_) {
    auto s = b->scores(features);
    const auto sel = argmin(s);
    out.push_back({sel, std::move(s), 1.0});
  }
  return out;
}

std::shared_ptr<const StackingEnsemble> fit_stacking(const TrainingData& data, std::span<const SelectorFactory> bases,
                                                     const SelectorFactory& meta, const StackingOptions& options,
                                                     std::uint64_t seed) {
  if (bases.empty()) throw Error(Errc::EmptyEnsemble, "stacking needs at least one base selector");
  const auto n = data.size();
  std::vector<std::size_t> base_rows(n);
  std::iota(base_rows.begin(), base_rows.end(), 0);
  std::vector<std::size_t> meta_rows = base_rows;
  if (options.disjoint_ratio) {
    const double rho = *options.disjoint_ratio;
    if (!(rho > 0.0 && rho < 1.0)) throw Error(Errc::InvalidConfig, "disjoint split ratio must lie in (0, 1)");
    std::mt19937_64 rng(seed);
    std::shuffle(base_rows.begin(), base_rows.end(), rng);
    const auto n_base = static_cast<std::size_t>(std::llround(rho * static_cast<double>(n)));
    if (n_base < 2 || n - n_base < 2) {
      throw Error(Errc::DegenerateTraining, "disjoint split leaves fewer than 2 instances on one side");
    }
    meta_rows.assign(base_rows.begin() + static_cast<std::ptrdiff_t>(n_base), base_rows.end());
    base_rows.resize(n_base);
    std::sort(base_rows.begin(), base_rows.end());
    std::sort(meta_rows.begin(), meta_rows.end());
  }

  const auto base_data = subset(data, base_rows);
  std::vector<SelectorPtr> fitted;
  for (std::size_t j = 0; j < bases.size(); ++j) fitted.push_back(bases[j](base_data, member_seed(seed, j)));

  auto meta_data = subset(data, meta_rows);
  StackingEnsemble probe(fitted, nullptr, std::nullopt, std::nullopt, options.use_base_predictions);
  Matrix augmented;
  for (std::size_t r = 0; r < meta_data.size(); ++r) augmented.append_row(probe.meta_features(meta_data.features.row(r)));

  std::optional<learn::Preprocessor> pre;
  std::optional<learn::VarianceThreshold> selection;
  if (options.variance_threshold) {
    pre = learn::Preprocessor::fit(augmented);
    const auto z = pre->transform(augmented);
    selection = learn::VarianceThreshold::fit(z, *options.variance_threshold);
    augmented = selection->apply(z);
  }
  meta_data.features = std::move(augmented);
  auto meta_model = meta(meta_data, member_seed(seed, bases.size()));
  return std::make_shared<StackingEnsemble>(std::move(fitted), std::move(meta_model), std::move(pre),
                                            std::move(selection), options.use_base_predictions);
}

}  // namespace asmeta
