#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "asmeta/matrix.hpp"

namespace asmeta::learn {

/// Median imputation followed by standardization, fit on training rows only.
/// Constant columns map to 0; columns missing everywhere impute to 0.
class Preprocessor {
 public:
  static Preprocessor fit(const Matrix& x);

  std::vector<double> transform(std::span<const double> row) const;
  Matrix transform(const Matrix& x) const;

  const std::vector<double>& medians() const { return median_; }
  const std::vector<double>& means() const { return mean_; }
  const std::vector<double>& stddevs() const { return sd_; }

 private:
  std::vector<double> median_, mean_, sd_;
};

enum class Task { Regression, Classification };

struct ForestParams {
  std::size_t n_trees = 100;
  /// 0 means unbounded.
  std::size_t max_depth = 0;
  /// 0 selects the task default: 1 for classification, 5 for regression.
  std::size_t min_leaf = 0;
  /// 0 selects ceil(sqrt(d)).
  std::size_t mtry = 0;
  std::uint64_t seed = 1;
  /// Row bootstrap per tree.
  bool bootstrap = true;
};

struct Dataset {
  Matrix x;
  /// Real targets (regression) or class ids stored as doubles (classification).
  std::vector<double> y;
  /// Non-negative sample weights; empty means all ones.
  std::vector<double> w;
  /// Number of classes for classification; labels must be < n_classes.
  std::size_t n_classes = 0;
};

/// Random forest of axis-aligned CART trees with weighted impurity.
/// Splits maximize weighted variance reduction (regression) or weighted
/// Gini reduction (classification); leaves hold weighted means or weighted
/// class histograms.
class Forest {
 public:
  /// Throws Error(DegenerateTraining) on an empty dataset or all-zero weights.
  static Forest fit(const Dataset& data, const ForestParams& params, Task task);

  /// Mean of the trees' leaf values.
  double predict(std::span<const double> x) const;
  /// Mean of the trees' normalized leaf histograms.
  std::vector<double> predict_proba(std::span<const double> x) const;

  Task task() const { return task_; }
  std::size_t n_trees() const { return trees_.size(); }

  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::size_t left = 0, right = 0;
    std::size_t value_offset = 0;  // into Tree::values
  };
  struct Tree {
    std::vector<Node> nodes;
    std::vector<double> values;
  };
  const std::vector<Tree>& trees() const { return trees_; }

 private:
  const Node& leaf_for(const Tree& tree, std::span<const double> x) const;

  Task task_ = Task::Regression;
  std::size_t n_classes_ = 0;
  std::vector<Tree> trees_;
};

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Exhaustive Euclidean nearest-neighbor index.
class KnnIndex {
 public:
  explicit KnnIndex(Matrix points) : points_(std::move(points)) {}

  /// k nearest stored rows by ascending distance; ties keep insertion order.
  /// Throws Error(KTooLarge) unless 1 <= k <= size().
  std::vector<Neighbor> query(std::span<const double> x, std::size_t k) const;

  std::size_t size() const { return points_.rows(); }

 private:
  Matrix points_;
};

/// k-means with k-means++ seeding and Lloyd iterations until the assignment
/// stops changing or 100 iterations pass.
class KMeans {
 public:
  /// Throws Error(KTooLarge) unless 1 <= k <= x.rows().
  static KMeans fit(const Matrix& x, std::size_t k, std::uint64_t seed);

  const Matrix& centroids() const { return centroids_; }
  const std::vector<std::size_t>& assignment() const { return assignment_; }
  /// Distance of every training point to its own centroid.
  const std::vector<double>& distances() const { return distances_; }
  /// Sum of squared distances after seeding and after every Lloyd step.
  const std::vector<double>& objective_history() const { return objective_; }

  /// Nearest centroid and its distance.
  Neighbor nearest(std::span<const double> x) const;

 private:
  Matrix centroids_;
  std::vector<std::size_t> assignment_;
  std::vector<double> distances_;
  std::vector<double> objective_;
};

/// Keeps the columns whose population variance exceeds the threshold.
class VarianceThreshold {
 public:
  /// Throws Error(AllColumnsDropped) when no column survives.
  static VarianceThreshold fit(const Matrix& x, double threshold);

  std::vector<double> apply(std::span<const double> row) const;
  Matrix apply(const Matrix& x) const;

  const std::vector<bool>& kept() const { return kept_; }
  double threshold() const { return threshold_; }

 private:
  std::vector<bool> kept_;
  double threshold_ = 0.0;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace asmeta::learn
