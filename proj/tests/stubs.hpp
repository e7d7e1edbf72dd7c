#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "asmeta/selectors.hpp"

namespace stubs {

/// Selector whose scores are a fixed function of the feature vector.
class FunctionSelector final : public asmeta::Selector {
 public:
  using Fn = std::function<std::vector<double>(std::span<const double>)>;
  FunctionSelector(std::size_t k, Fn fn, bool needs_features = true)
      : k_(k), fn_(std::move(fn)), needs_features_(needs_features) {}

  std::vector<double> scores(std::span<const double> features) const override { return fn_(features); }
  bool needs_features() const override { return needs_features_; }
  std::size_t num_algorithms() const override { return k_; }

 private:
  std::size_t k_;
  Fn fn_;
  bool needs_features_;
};

/// Factory ignoring its training data.
inline asmeta::SelectorFactory constant_factory(asmeta::SelectorPtr sel) {
  return [sel](const asmeta::TrainingData&, std::uint64_t) { return sel; };
}

/// Picks table[round(feature 0)] as a dummy-score vector.
inline asmeta::SelectorPtr lookup(std::vector<std::size_t> table, std::size_t k) {
  return std::make_shared<FunctionSelector>(k, [table, k](std::span<const double> f) {
    std::vector<double> s(k, 1.0);
    s[table.at(static_cast<std::size_t>(std::lround(f[0])))] = 0.0;
    return s;
  });
}

}  // namespace stubs
