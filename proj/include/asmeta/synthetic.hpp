#pragma once

#include <cstdint>
#include <string>

#include "asmeta/scenario.hpp"

namespace asmeta {

enum class SyntheticRule {
  /// Best algorithm index is encoded by the sign bits of the first
  /// ceil(log2 K) features (modulo K).
  FeatureSign,
  /// Best algorithm drawn uniformly, independent of the features.
  UniformRandom,
};

struct SyntheticConfig {
  std::size_t n_instances = 100;
  std::size_t n_algorithms = 4;
  std::size_t n_features = 4;
  double cutoff = 100.0;
  SyntheticRule rule = SyntheticRule::FeatureSign;
  /// Standard deviation of multiplicative log-normal runtime noise.
  double noise_sd = 0.0;
  std::uint64_t seed = 1;
  int n_folds = 10;
  /// Feature costs are drawn uniformly from [0, max_feature_cost].
  double max_feature_cost = 0.0;
  std::string name = "synthetic";
};

/// Number of leading features that encode the best algorithm under FeatureSign.
std::size_t sign_bits(std::size_t n_algorithms);

/// The algorithm FeatureSign assigns to a feature vector.
std::size_t feature_sign_label(std::span<const double> features, std::size_t n_algorithms);

/// Deterministic for a fixed config. Folds are assigned round-robin.
/// Throws Error(InvalidConfig) for nonpositive sizes, fewer instances than
/// folds, or too few features for the FeatureSign encoding.
Scenario generate_synthetic(const SyntheticConfig& config);

}  // namespace asmeta
