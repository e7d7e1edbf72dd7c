#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "asmeta/matrix.hpp"
#include "asmeta/scenario.hpp"
#include "asmeta/training_data.hpp"

namespace testsupport {

inline std::string fixture(const std::string& rel) { return std::string(ASMETA_FIXTURES_DIR) + "/" + rel; }

/// Builds a scenario from a runtime matrix; entries >= cutoff are timeouts.
inline asmeta::Scenario scenario_from(const std::vector<std::vector<double>>& runtimes, double cutoff,
                                      std::vector<std::vector<double>> features = {},
                                      std::vector<double> costs = {}, std::vector<int> folds = {}) {
  const auto n = runtimes.size();
  const auto k = runtimes.front().size();
  std::vector<std::string> inst, algs;
  for (std::size_t i = 0; i < n; ++i) inst.push_back("i" + std::to_string(i));
  for (std::size_t a = 0; a < k; ++a) algs.push_back("a" + std::to_string(a));
  std::vector<asmeta::RunRecord> runs;
  for (const auto& row : runtimes)
    for (double r : row) runs.push_back(r >= cutoff ? asmeta::RunRecord{cutoff, false} : asmeta::RunRecord{r, true});
  if (features.empty()) {
    for (std::size_t i = 0; i < n; ++i) features.push_back({static_cast<double>(i)});
  }
  std::vector<std::string> fnames;
  for (std::size_t f = 0; f < features.front().size(); ++f) fnames.push_back("f" + std::to_string(f));
  if (costs.empty()) costs.assign(n, 0.0);
  if (folds.empty()) {
    for (std::size_t i = 0; i < n; ++i) folds.push_back(1 + static_cast<int>(i % 2));
  }
  return asmeta::Scenario("test", inst, algs, cutoff, runs, fnames, features, costs, folds);
}

/// Training data straight from feature rows and a cost matrix.
inline asmeta::TrainingData data_from(const std::vector<std::vector<double>>& features,
                                      const std::vector<std::vector<double>>& costs) {
  asmeta::TrainingData d;
  d.features = asmeta::Matrix::from_rows(features);
  d.costs = asmeta::Matrix::from_rows(costs);
  return d;
}

/// Per-row best algorithm by brute force, lowest index on ties.
inline std::vector<std::size_t> brute_best(const asmeta::Matrix& costs) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < costs.rows(); ++r) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < costs.cols(); ++a)
      if (costs(r, a) < costs(r, best)) best = a;
    out.push_back(best);
  }
  return out;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace testsupport
