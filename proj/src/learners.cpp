#include "asmeta/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "asmeta/error.hpp"

namespace asmeta::learn {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Preprocessor

Preprocessor Preprocessor::fit(const Matrix& x) {
  Preprocessor p;
  const auto d = x.cols();
  p.median_.assign(d, 0.0);
  p.mean_.assign(d, 0.0);
  p.sd_.assign(d, 0.0);
  std::vector<double> col;
  for (std::size_t j = 0; j < d; ++j) {
    col.clear();
    for (std::size_t r = 0; r < x.rows(); ++r) {
      if (!std::isnan(x(r, j))) col.push_back(x(r, j));
    }
    if (col.empty()) continue;
    std::sort(col.begin(), col.end());
    const auto m = col.size();
    p.median_[j] = m % 2 ? col[m / 2] : 0.5 * (col[m / 2 - 1] + col[m / 2]);
    // statistics of the imputed column
    double sum = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) sum += std::isnan(x(r, j)) ? p.median_[j] : x(r, j);
    const double mean = sum / static_cast<double>(x.rows());
    double ss = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const double v = (std::isnan(x(r, j)) ? p.median_[j] : x(r, j)) - mean;
      ss += v * v;
    }
    p.mean_[j] = mean;
    p.sd_[j] = std::sqrt(ss / static_cast<double>(x.rows()));
  }
  return p;
}

std::vector<double> Preprocessor::transform(std::span<const double> row) const {
  if (row.size() != median_.size()) {
    throw Error(Errc::UnknownInstanceFeatures, "expected " + std::to_string(median_.size()) +
                                                   " features, got " + std::to_string(row.size()));
  }
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double v = std::isnan(row[j]) ? median_[j] : row[j];
    // relative guard so float noise in a constant column does not blow up
    const bool constant = sd_[j] <= 1e-12 * std::max(1.0, std::abs(mean_[j]));
    out[j] = constant ? 0.0 : (v - mean_[j]) / sd_[j];
  }
  return out;
}

Matrix Preprocessor::transform(const Matrix& x) const {
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto t = transform(x.row(r));
    std::copy(t.begin(), t.end(), out.row(r).begin());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Forest

namespace {

struct TreeBuilder {
  const Dataset& data;
  Task task;
  std::size_t n_classes;
  std::size_t min_leaf;
  std::size_t max_depth;
  std::size_t mtry;
  std::mt19937_64& rng;
  std::vector<double> weight;      // effective weight per row (w * multiplicity)
  std::vector<std::size_t> count;  // bootstrap multiplicity per row
  Forest::Tree tree;
  std::vector<std::size_t> feature_pool;

  // Sum-of-squares style node score: S^2/W (regression) or sum_c W_c^2/W
  // (classification). Impurity reduction equals the children's score sum
  // minus the parent's.
  struct Stats {
    double w = 0.0;
    double s = 0.0;
    std::vector<double> cls;
    std::size_t n = 0;

    double score() const {
      if (w <= 0.0) return 0.0;
      if (cls.empty()) return s * s / w;
      double q = 0.0;
      for (double c : cls) q += c * c;
      return q / w;
    }
  };

  Stats empty_stats() const {
    Stats st;
    if (task == Task::Classification) st.cls.assign(n_classes, 0.0);
    return st;
  }

  void add(Stats& st, std::size_t r, double sign = 1.0) const {
    st.w += sign * weight[r];
    if (sign > 0) st.n += count[r];
    else st.n -= count[r];
    if (task == Task::Regression) {
      st.s += sign * weight[r] * data.y[r];
    } else {
      st.cls[static_cast<std::size_t>(data.y[r])] += sign * weight[r];
    }
  }

  std::size_t make_leaf(const Stats& st) {
    Forest::Node node;
    node.value_offset = tree.values.size();
    if (task == Task::Regression) {
      tree.values.push_back(st.w > 0.0 ? st.s / st.w : 0.0);
    } else {
      for (std::size_t c = 0; c < n_classes; ++c) {
        tree.values.push_back(st.w > 0.0 ? st.cls[c] / st.w : 1.0 / static_cast<double>(n_classes));
      }
    }
    tree.nodes.push_back(node);
    return tree.nodes.size() - 1;
  }

  bool pure(const std::vector<std::size_t>& rows) const {
    for (auto r : rows) {
      if (data.y[r] != data.y[rows.front()]) return false;
    }
    return true;
  }

  std::size_t build(std::vector<std::size_t> rows, std::size_t depth) {
    Stats parent = empty_stats();
    for (auto r : rows) add(parent, r);
    if ((max_depth != 0 && depth >= max_depth) || parent.n < 2 * min_leaf || parent.w <= 0.0 ||
        pure(rows) || data.x.cols() == 0) {
      return make_leaf(parent);
    }

    const double parent_score = parent.score();
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;

    // partial Fisher-Yates draw of mtry candidate features
    const auto d = data.x.cols();
    for (std::size_t k = 0; k < mtry; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, d - 1);
      std::swap(feature_pool[k], feature_pool[pick(rng)]);
    }
    std::vector<std::pair<double, std::size_t>> sorted(rows.size());
    for (std::size_t k = 0; k < mtry; ++k) {
      const auto f = feature_pool[k];
      for (std::size_t p = 0; p < rows.size(); ++p) sorted[p] = {data.x(rows[p], f), rows[p]};
      std::sort(sorted.begin(), sorted.end());
      Stats left = empty_stats();
      Stats right = parent;
      for (std::size_t p = 0; p + 1 < sorted.size(); ++p) {
        add(left, sorted[p].second);
        add(right, sorted[p].second, -1.0);
        if (sorted[p].first == sorted[p + 1].first) continue;
        if (left.n < min_leaf || right.n < min_leaf) continue;
        const double gain = left.score() + right.score() - parent_score;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (sorted[p].first + sorted[p + 1].first);
          // midpoint can round onto the upper value for adjacent doubles
          if (best_threshold >= sorted[p + 1].first) best_threshold = sorted[p].first;
        }
      }
    }
    if (best_feature < 0 || best_gain <= 1e-12 * std::abs(parent_score)) return make_leaf(parent);

    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows) {
      (data.x(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const auto index = tree.nodes.size();
    tree.nodes.emplace_back();
    tree.nodes[index].feature = best_feature;
    tree.nodes[index].threshold = best_threshold;
    const auto l = build(std::move(left_rows), depth + 1);
    const auto rr = build(std::move(right_rows), depth + 1);
    tree.nodes[index].left = l;
    tree.nodes[index].right = rr;
    return index;
  }
};

}  // namespace

Forest Forest::fit(const Dataset& data, const ForestParams& params, Task task) {
  const auto n = data.x.rows();
  if (n == 0 || data.y.size() != n) throw Error(Errc::DegenerateTraining, "forest fit on an empty dataset");
  if (!data.w.empty() && data.w.size() != n) throw Error(Errc::DegenerateTraining, "weight vector length mismatch");
  std::vector<double> w = data.w.empty() ? std::vector<double>(n, 1.0) : data.w;
  if (std::accumulate(w.begin(), w.end(), 0.0) <= 0.0) {
    throw Error(Errc::DegenerateTraining, "all sample weights are zero");
  }
  Forest forest;
  forest.task_ = task;
  if (task == Task::Classification) {
    forest.n_classes_ = data.n_classes;
    for (double y : data.y) {
      if (y < 0 || static_cast<std::size_t>(y) >= data.n_classes) {
        throw Error(Errc::DegenerateTraining, "class label outside [0, n_classes)");
      }
    }
  }
  const auto d = data.x.cols();
  const std::size_t min_leaf =
      params.min_leaf ? params.min_leaf : (task == Task::Classification ? 1 : 5);
  std::size_t mtry = params.mtry ? std::min(params.mtry, d)
                                 : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
  mtry = std::min(mtry, d);

  const auto n_trees = std::max<std::size_t>(1, params.n_trees);
  forest.trees_.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    std::mt19937_64 rng(params.seed * 0x9E3779B97F4A7C15ULL + t);
    std::vector<std::size_t> count(n, 1);
    if (params.bootstrap) {
      std::fill(count.begin(), count.end(), 0);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (std::size_t k = 0; k < n; ++k) ++count[pick(rng)];
    }
    TreeBuilder b{data, task, forest.n_classes_, min_leaf, params.max_depth, mtry, rng, {}, count, {}, {}};
    b.weight.resize(n);
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < n; ++r) {
      b.weight[r] = w[r] * static_cast<double>(count[r]);
      if (count[r] > 0 && w[r] > 0.0) rows.push_back(r);
    }
    if (rows.empty()) {
      // unlucky bootstrap hit only zero-weight rows: fall back to all weighted rows
      for (std::size_t r = 0; r < n; ++r) {
        b.count[r] = 1;
        b.weight[r] = w[r];
        if (w[r] > 0.0) rows.push_back(r);
      }
    }
    b.feature_pool.resize(d);
    std::iota(b.feature_pool.begin(), b.feature_pool.end(), 0);
    b.build(std::move(rows), 0);
    forest.trees_.push_back(std::move(b.tree));
  }
  return forest;
}

const Forest::Node& Forest::leaf_for(const Tree& tree, std::span<const double> x) const {
  const Node* node = &tree.nodes.front();
  while (node->feature >= 0) {
    node = &tree.nodes[x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right];
  }
  return *node;
}

double Forest::predict(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& tree : trees_) sum += tree.values[leaf_for(tree, x).value_offset];
  return sum / static_cast<double>(trees_.size());
}

std::vector<double> Forest::predict_proba(std::span<const double> x) const {
  std::vector<double> p(n_classes_, 0.0);
  for (const auto& tree : trees_) {
    const auto off = leaf_for(tree, x).value_offset;
    for (std::size_t c = 0; c < n_classes_; ++c) p[c] += tree.values[off + c];
  }
  for (auto& v : p) v /= static_cast<double>(trees_.size());
  return p;
}

// ---------------------------------------------------------------------------
// KnnIndex

std::vector<Neighbor> KnnIndex::query(std::span<const double> x, std::size_t k) const {
  if (k == 0 || k > points_.rows()) {
    throw Error(Errc::KTooLarge, "k=" + std::to_string(k) + " with " + std::to_string(points_.rows()) + " points");
  }
  std::vector<Neighbor> all(points_.rows());
  for (std::size_t r = 0; r < points_.rows(); ++r) {
    all[r] = {r, std::sqrt(squared_distance(points_.row(r), x))};
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Neighbor& a, const Neighbor& b) { return a.distance < b.distance; });
  all.resize(k);
  return all;
}

// ---------------------------------------------------------------------------
// KMeans

KMeans KMeans::fit(const Matrix& x, std::size_t k, std::uint64_t seed) {
  const auto n = x.rows();
  if (k == 0 || k > n) {
    throw Error(Errc::KTooLarge, "k=" + std::to_string(k) + " clusters for " + std::to_string(n) + " points");
  }
  std::mt19937_64 rng(seed);
  KMeans km;
  km.centroids_ = Matrix(k, x.cols());

  // k-means++ seeding
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  auto take = [&](std::size_t c, std::size_t r) {
    chosen[r] = true;
    std::copy(x.row(r).begin(), x.row(r).end(), km.centroids_.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(x.row(i), x.row(r)));
  };
  take(0, std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i] || d2[i] <= 0.0) continue;
        pick = i;
        u -= d2[i];
        if (u < 0.0) break;
      }
    }
    if (pick == n) {
      // only duplicates left: take a uniformly random unchosen point
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i)
        if (!chosen[i]) rest.push_back(i);
      pick = rest[std::uniform_int_distribution<std::size_t>(0, rest.size() - 1)(rng)];
    }
    take(c, pick);
  }

  km.assignment_.assign(n, k);
  auto assign = [&]() {
    bool changed = false;
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dd = squared_distance(x.row(i), km.centroids_.row(c));
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      changed = changed || km.assignment_[i] != best;
      km.assignment_[i] = best;
      objective += best_d;
    }
    km.objective_.push_back(objective);
    return changed;
  };

  assign();
  for (int iter = 0; iter < 100; ++iter) {
    Matrix sums(k, x.cols());
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = sums.row(km.assignment_[i]);
      for (std::size_t j = 0; j < x.cols(); ++j) row[j] += x(i, j);
      ++sizes[km.assignment_[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t j = 0; j < x.cols(); ++j) km.centroids_(c, j) = sums(c, j) / static_cast<double>(sizes[c]);
    }
    if (!assign()) break;
  }

  km.distances_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    km.distances_[i] = std::sqrt(squared_distance(x.row(i), km.centroids_.row(km.assignment_[i])));
  }
  return km;
}

Neighbor KMeans::nearest(std::span<const double> x) const {
  Neighbor best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t c = 0; c < centroids_.rows(); ++c) {
    const double d = squared_distance(x, centroids_.row(c));
    if (d < best.distance) best = {c, d};
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

// ---------------------------------------------------------------------------
// VarianceThreshold

VarianceThreshold VarianceThreshold::fit(const Matrix& x, double threshold) {
  VarianceThreshold vt;
  vt.threshold_ = threshold;
  vt.kept_.assign(x.cols(), false);
  bool any = false;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, j);
    mean /= static_cast<double>(x.rows());
    double var = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) var += (x(r, j) - mean) * (x(r, j) - mean);
    var /= static_cast<double>(x.rows());
    vt.kept_[j] = var > threshold;
    any = any || vt.kept_[j];
  }
  if (!any) throw Error(Errc::AllColumnsDropped, "no column has variance above " + std::to_string(threshold));
  return vt;
}

std::vector<double> VarianceThreshold::apply(std::span<const double> row) const {
  std::vector<double> out;
  for (std::size_t j = 0; j < row.size(); ++j)
    if (kept_[j]) out.push_back(row[j]);
  return out;
}

Matrix VarianceThreshold::apply(const Matrix& x) const {
  Matrix out;
  for (std::size_t r = 0; r < x.rows(); ++r) out.append_row(apply(x.row(r)));
  return out;
}

}  // namespace asmeta::learn
