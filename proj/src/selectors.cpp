#include "asmeta/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asmeta/error.hpp"

namespace asmeta {

std::vector<double> dummy_scores(std::size_t selection, std::size_t n_algorithms) {
  if (selection >= n_algorithms) {
    throw Error(Errc::UnknownAlgorithm, "selection " + std::to_string(selection) + " outside " +
                                            std::to_string(n_algorithms) + " algorithms");
  }
  std::vector<double> s(n_algorithms, 1.0);
  s[selection] = 0.0;
  return s;
}

std::size_t default_isac_clusters(std::size_t n_train) {
  const auto root = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_train) / 2.0)));
  return std::min<std::size_t>(10, std::max<std::size_t>(2, root));
}

namespace {

void require_training(const TrainingData& data, std::size_t min_rows, const char* who) {
  if (data.size() < min_rows) {
    throw Error(Errc::DegenerateTraining, std::string(who) + " needs at least " + std::to_string(min_rows) +
                                              " training instances, got " + std::to_string(data.size()));
  }
  if (data.num_algorithms() == 0) throw Error(Errc::DegenerateTraining, std::string(who) + ": no algorithms");
}

std::vector<double> column_means(const Matrix& costs, std::span<const std::size_t> rows) {
  std::vector<double> mean(costs.cols(), 0.0);
  for (auto r : rows)
    for (std::size_t a = 0; a < costs.cols(); ++a) mean[a] += costs(r, a);
  for (auto& m : mean) m /= static_cast<double>(rows.size());
  return mean;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

learn::ForestParams forest_params(const ForestSelectorParams& p, std::uint64_t seed) {
  learn::ForestParams fp;
  fp.n_trees = p.n_trees;
  fp.max_depth = p.max_depth;
  fp.seed = seed;
  return fp;
}

class PerAlgoSelector final : public Selector {
 public:
  PerAlgoSelector(learn::Preprocessor pre, std::vector<learn::Forest> models)
      : pre_(std::move(pre)), models_(std::move(models)) {}

  std::vector<double> scores(std::span<const double> features) const override {
    const auto x = pre_.transform(features);
    std::vector<double> s(models_.size());
    for (std::size_t a = 0; a < models_.size(); ++a) s[a] = models_[a].predict(x);
    return s;
  }
  std::size_t num_algorithms() const override { return models_.size(); }

 private:
  learn::Preprocessor pre_;
  std::vector<learn::Forest> models_;
};

class MulticlassSelector final : public Selector {
 public:
  MulticlassSelector(learn::Preprocessor pre, learn::Forest model, std::size_t k)
      : pre_(std::move(pre)), model_(std::move(model)), k_(k) {}

  std::vector<double> scores(std::span<const double> features) const override {
    auto p = model_.predict_proba(pre_.transform(features));
    for (auto& v : p) v = 1.0 - v;
    return p;
  }
  std::size_t num_algorithms() const override { return k_; }

 private:
  learn::Preprocessor pre_;
  learn::Forest model_;
  std::size_t k_;
};

class PairwiseSelector final : public Selector {
 public:
  struct PairModel {
    std::size_t a, b;
    learn::Forest model;  // class 1 means a beats b
  };

  PairwiseSelector(learn::Preprocessor pre, std::vector<PairModel> pairs, std::size_t k)
      : pre_(std::move(pre)), pairs_(std::move(pairs)), k_(k) {}

  std::vector<double> scores(std::span<const double> features) const override {
    const auto x = pre_.transform(features);
    std::vector<double> s(k_, static_cast<double>(k_));
    for (const auto& p : pairs_) {
      const auto proba = p.model.predict_proba(x);
      s[proba[1] >= 0.5 ? p.a : p.b] -= 1.0;
    }
    return s;
  }
  std::size_t num_algorithms() const override { return k_; }

 private:
  learn::Preprocessor pre_;
  std::vector<PairModel> pairs_;
  std::size_t k_;
};

class SunnySelector final : public Selector {
 public:
  SunnySelector(learn::Preprocessor pre, learn::KnnIndex index, Matrix costs, std::size_t k)
      : pre_(std::move(pre)), index_(std::move(index)), costs_(std::move(costs)), k_(k) {}

  std::vector<double> scores(std::span<const double> features) const override {
    const auto hits = index_.query(pre_.transform(features), k_);
    std::vector<std::size_t> rows;
    rows.reserve(hits.size());
    for (const auto& h : hits) rows.push_back(h.index);
    return column_means(costs_, rows);
  }
  std::size_t num_algorithms() const override { return costs_.cols(); }

 private:
  learn::Preprocessor pre_;
  learn::KnnIndex index_;
  Matrix costs_;
  std::size_t k_;
};

class IsacSelector final : public Selector {
 public:
  IsacSelector(learn::Preprocessor pre, learn::KMeans km, std::vector<std::vector<double>> cluster_costs,
               double threshold, std::size_t sbs, std::size_t n_algorithms)
      : pre_(std::move(pre)),
        km_(std::move(km)),
        cluster_costs_(std::move(cluster_costs)),
        threshold_(threshold),
        sbs_(sbs),
        n_algorithms_(n_algorithms) {}

  std::vector<double> scores(std::span<const double> features) const override {
    const auto hit = km_.nearest(pre_.transform(features));
    if (hit.distance <= threshold_ && !cluster_costs_[hit.index].empty()) return cluster_costs_[hit.index];
    return dummy_scores(sbs_, num_algorithms());
  }
  std::size_t num_algorithms() const override { return n_algorithms_; }

 private:
  learn::Preprocessor pre_;
  learn::KMeans km_;
  std::vector<std::vector<double>> cluster_costs_;
  double threshold_;
  std::size_t sbs_;
  std::size_t n_algorithms_;
};

class ConstantSelector final : public Selector {
 public:
  explicit ConstantSelector(std::vector<double> scores) : scores_(std::move(scores)) {}

  std::vector<double> scores(std::span<const double>) const override { return scores_; }
  bool needs_features() const override { return false; }
  std::size_t num_algorithms() const override { return scores_.size(); }

 private:
  std::vector<double> scores_;
};

}  // namespace

SelectorPtr fit_peralgo(const TrainingData& data, std::uint64_t seed, const ForestSelectorParams& params) {
  require_training(data, 2, "peralgo");
  auto pre = learn::Preprocessor::fit(data.features);
  learn::Dataset ds{pre.transform(data.features), std::vector<double>(data.size()), {}, 0};
  std::vector<learn::Forest> models;
  for (std::size_t a = 0; a < data.num_algorithms(); ++a) {
    for (std::size_t r = 0; r < data.size(); ++r) ds.y[r] = data.costs(r, a);
    models.push_back(learn::Forest::fit(ds, forest_params(params, seed + a), learn::Task::Regression));
  }
  return std::make_shared<PerAlgoSelector>(std::move(pre), std::move(models));
}

SelectorPtr fit_multiclass(const TrainingData& data, std::uint64_t seed, const ForestSelectorParams& params) {
  require_training(data, 2, "multiclass");
  auto pre = learn::Preprocessor::fit(data.features);
  const auto labels = best_labels(data.costs);
  learn::Dataset ds{pre.transform(data.features), {labels.begin(), labels.end()}, {}, data.num_algorithms()};
  auto model = learn::Forest::fit(ds, forest_params(params, seed), learn::Task::Classification);
  return std::make_shared<MulticlassSelector>(std::move(pre), std::move(model), data.num_algorithms());
}

SelectorPtr fit_pairwise(const TrainingData& data, std::uint64_t seed, const ForestSelectorParams& params) {
  require_training(data, 2, "pairwise");
  const auto k = data.num_algorithms();
  auto pre = learn::Preprocessor::fit(data.features);
  const auto x = pre.transform(data.features);
  std::vector<PairwiseSelector::PairModel> pairs;
  std::size_t pair_index = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b, ++pair_index) {
      learn::Dataset ds;
      ds.n_classes = 2;
      for (std::size_t r = 0; r < data.size(); ++r) {
        const double gap = std::abs(data.costs(r, a) - data.costs(r, b));
        if (gap <= 0.0) continue;  // zero-weight rows carry no signal
        ds.x.append_row(x.row(r));
        ds.y.push_back(data.costs(r, a) < data.costs(r, b) ? 1.0 : 0.0);
        ds.w.push_back(gap);
      }
      if (ds.y.empty()) {
        // the pair never differs: unweighted classifier over all rows
        ds = learn::Dataset{x, std::vector<double>(data.size(), 0.0), {}, 2};
      }
      pairs.push_back({a, b, learn::Forest::fit(ds, forest_params(params, seed + pair_index),
                                                learn::Task::Classification)});
    }
  }
  return std::make_shared<PairwiseSelector>(std::move(pre), std::move(pairs), k);
}

SelectorPtr fit_sunny(const TrainingData& data, std::size_t k) {
  require_training(data, 1, "sunny");
  if (k == 0) throw Error(Errc::KTooLarge, "sunny needs k >= 1");
  auto pre = learn::Preprocessor::fit(data.features);
  learn::KnnIndex index(pre.transform(data.features));
  return std::make_shared<SunnySelector>(std::move(pre), std::move(index), data.costs,
                                         std::min(k, data.size()));
}

SelectorPtr fit_isac(const TrainingData& data, std::uint64_t seed, const IsacParams& params) {
  require_training(data, 1, "isac");
  const auto n = data.size();
  const auto k = std::min(n, params.k_clusters ? params.k_clusters : default_isac_clusters(n));
  auto pre = learn::Preprocessor::fit(data.features);
  const auto x = pre.transform(data.features);
  auto km = learn::KMeans::fit(x, k, seed);

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t r = 0; r < n; ++r) members[km.assignment()[r]].push_back(r);
  std::vector<std::vector<double>> cluster_costs(k);
  for (std::size_t c = 0; c < k; ++c) {
    if (!members[c].empty()) cluster_costs[c] = column_means(data.costs, members[c]);
  }

  const auto& dist = km.distances();
  double mean = 0.0;
  for (double d : dist) mean += d;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double d : dist) var += (d - mean) * (d - mean);
  const double threshold = mean + params.sd_multiplier * std::sqrt(var / static_cast<double>(n));

  const auto sbs = argmin(column_means(data.costs, all_rows(n)));
  return std::make_shared<IsacSelector>(std::move(pre), std::move(km), std::move(cluster_costs), threshold, sbs,
                                        data.num_algorithms());
}

SelectorPtr fit_sbs(const TrainingData& data) {
  require_training(data, 1, "sbs");
  // column sums, so the argmin agrees with the metrics module's SBS
  std::vector<double> sums(data.num_algorithms(), 0.0);
  for (std::size_t r = 0; r < data.size(); ++r)
    for (std::size_t a = 0; a < data.num_algorithms(); ++a) sums[a] += data.costs(r, a);
  return std::make_shared<ConstantSelector>(std::move(sums));
}

}  // namespace asmeta
