#include "asmeta/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "asmeta/error.hpp"

namespace asmeta {

std::size_t sign_bits(std::size_t n_algorithms) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n_algorithms) ++bits;
  return bits;
}

std::size_t feature_sign_label(std::span<const double> features, std::size_t n_algorithms) {
  std::size_t code = 0;
  const auto bits = sign_bits(n_algorithms);
  for (std::size_t j = 0; j < bits; ++j) {
    if (features[j] >= 0.0) code |= std::size_t{1} << j;
  }
  return code % n_algorithms;
}

Scenario generate_synthetic(const SyntheticConfig& cfg) {
  auto invalid = [](const std::string& why) { throw Error(Errc::InvalidConfig, why); };
  if (cfg.n_instances == 0 || cfg.n_algorithms == 0) invalid("sizes must be positive");
  if (cfg.n_folds <= 0) invalid("n_folds must be positive");
  if (!(cfg.cutoff > 0.0)) invalid("cutoff must be positive");
  if (cfg.noise_sd < 0.0 || cfg.max_feature_cost < 0.0) invalid("noise_sd and max_feature_cost must be >= 0");
  if (cfg.n_instances < static_cast<std::size_t>(cfg.n_folds)) invalid("fewer instances than folds");
  if (cfg.rule == SyntheticRule::FeatureSign && cfg.n_features < sign_bits(cfg.n_algorithms)) {
    invalid("feature-sign rule needs at least ceil(log2 n_algorithms) features");
  }

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto n = cfg.n_instances;
  const auto k = cfg.n_algorithms;
  const double c = cfg.cutoff;

  std::vector<std::string> instances(n);
  std::vector<std::string> algorithms(k);
  std::vector<std::string> feature_names(cfg.n_features);
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "inst%04zu", i + 1);
    instances[i] = buf;
  }
  for (std::size_t a = 0; a < k; ++a) algorithms[a] = "algo" + std::to_string(a + 1);
  for (std::size_t j = 0; j < cfg.n_features; ++j) feature_names[j] = "f" + std::to_string(j);

  std::vector<RunRecord> runs(n * k);
  std::vector<std::vector<double>> features(n, std::vector<double>(cfg.n_features));
  std::vector<double> cost(n, 0.0);
  std::vector<int> folds(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : features[i]) x = normal(rng);
    std::size_t best = 0;
    if (cfg.rule == SyntheticRule::FeatureSign) {
      best = feature_sign_label(features[i], k);
    } else {
      best = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
    }
    for (std::size_t a = 0; a < k; ++a) {
      // best runs in [0.01C, 0.1C), the rest in [0.3C, 1.5C); anything past C times out
      const double u = unit(rng);
      double runtime = a == best ? c * (0.01 + 0.09 * u) : c * (0.3 + 1.2 * u);
      const double z = normal(rng);
      runtime *= std::exp(cfg.noise_sd * z);
      runs[i * k + a] = runtime <= c ? RunRecord{runtime, true} : RunRecord{c, false};
    }
    const double u = unit(rng);
    cost[i] = cfg.max_feature_cost * u;
    folds[i] = static_cast<int>(i % static_cast<std::size_t>(cfg.n_folds)) + 1;
  }
  return Scenario(cfg.name, std::move(instances), std::move(algorithms), c, std::move(runs),
                  std::move(feature_names), std::move(features), std::move(cost), std::move(folds));
}

}  // namespace asmeta
