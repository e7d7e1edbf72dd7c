#include "asmeta/metrics.hpp"

#include <algorithm>
#include <limits>

#include "asmeta/error.hpp"

namespace asmeta {

double pr10(const Scenario& scenario, std::size_t instance, std::size_t algorithm,
            double feature_cost_charged) {
  if (instance >= scenario.num_instances()) {
    throw Error(Errc::UnknownInstance, "instance index " + std::to_string(instance));
  }
  if (algorithm >= scenario.num_algorithms()) {
    throw Error(Errc::UnknownAlgorithm, "algorithm index " + std::to_string(algorithm));
  }
  const auto& r = scenario.run(instance, algorithm);
  if (!r.solved) return 10.0 * scenario.cutoff();
  return r.runtime + feature_cost_charged;
}

double par10(const Scenario& scenario, const SelectionTrace& trace) {
  if (trace.empty()) throw Error(Errc::EmptyInstanceSet, "cannot score an empty instance set");
  double sum = 0.0;
  for (const auto& c : trace) sum += pr10(scenario, c.instance, c.algorithm, c.feature_cost);
  return sum / static_cast<double>(trace.size());
}

double par10(const Scenario& scenario, std::span<const std::size_t> instances,
             const SelectionTrace& trace) {
  if (instances.empty()) throw Error(Errc::EmptyInstanceSet, "cannot score an empty instance set");
  if (trace.size() != instances.size()) {
    throw Error(Errc::UnknownInstance, "trace does not cover the scored instance set");
  }
  for (std::size_t k = 0; k < instances.size(); ++k) {
    if (trace[k].instance != instances[k]) {
      throw Error(Errc::UnknownInstance, "trace does not cover the scored instance set");
    }
  }
  return par10(scenario, trace);
}

std::size_t count_timeouts(const Scenario& scenario, const SelectionTrace& trace) {
  std::size_t n = 0;
  for (const auto& c : trace) n += scenario.run(c.instance, c.algorithm).solved ? 0 : 1;
  return n;
}

std::size_t best_algorithm(const Scenario& scenario, std::size_t instance) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < scenario.num_algorithms(); ++a) {
    if (scenario.pr10(instance, a) < scenario.pr10(instance, best)) best = a;
  }
  return best;
}

double oracle_par10(const Scenario& scenario, std::span<const std::size_t> instances) {
  return par10(scenario, oracle_trace(scenario, instances));
}

SelectionTrace oracle_trace(const Scenario& scenario, std::span<const std::size_t> instances) {
  if (instances.empty()) throw Error(Errc::EmptyInstanceSet, "oracle over an empty instance set");
  SelectionTrace trace;
  trace.reserve(instances.size());
  for (auto i : instances) trace.push_back({i, best_algorithm(scenario, i), 0.0});
  return trace;
}

std::size_t sbs(const Scenario& scenario, std::span<const std::size_t> train_instances) {
  if (train_instances.empty()) throw Error(Errc::EmptyInstanceSet, "SBS over an empty instance set");
  std::size_t best = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < scenario.num_algorithms(); ++a) {
    double sum = 0.0;
    for (auto i : train_instances) sum += scenario.pr10(i, a);
    if (sum < best_sum) {
      best_sum = sum;
      best = a;
    }
  }
  return best;
}

SelectionTrace constant_trace(std::span<const std::size_t> instances, std::size_t algorithm) {
  SelectionTrace trace;
  trace.reserve(instances.size());
  for (auto i : instances) trace.push_back({i, algorithm, 0.0});
  return trace;
}

double npar10(double par10_selector, double oracle, double sbs_par10) {
  if (!(sbs_par10 > oracle)) {
    throw Error(Errc::DegenerateGap, "SBS PAR10 does not exceed oracle PAR10");
  }
  return (par10_selector - oracle) / (sbs_par10 - oracle);
}

double as_oracle_par10(const Scenario& scenario, std::span<const SelectionTrace> traces) {
  if (traces.empty() || traces.front().empty()) {
    throw Error(Errc::EmptyInstanceSet, "AS-oracle needs at least one non-empty trace");
  }
  const auto n = traces.front().size();
  for (const auto& t : traces) {
    if (t.size() != n) throw Error(Errc::UnknownInstance, "traces cover different instance sets");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto instance = traces.front()[k].instance;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : traces) {
      if (t[k].instance != instance) {
        throw Error(Errc::UnknownInstance, "traces cover different instance sets");
      }
      best = std::min(best, pr10(scenario, instance, t[k].algorithm, t[k].feature_cost));
    }
    sum += best;
  }
  return sum / static_cast<double>(n);
}

std::size_t sbas(std::span<const double> train_par10) {
  if (train_par10.empty()) throw Error(Errc::EmptyInstanceSet, "SBAS over an empty selector set");
  return static_cast<std::size_t>(std::min_element(train_par10.begin(), train_par10.end()) -
                                  train_par10.begin());
}

ScoreReport score(const Scenario& scenario, const SelectionTrace& trace, std::size_t sbs_algorithm) {
  std::vector<std::size_t> instances;
  instances.reserve(trace.size());
  for (const auto& c : trace) instances.push_back(c.instance);
  ScoreReport r;
  r.par10 = par10(scenario, trace);
  r.n_timeouts = count_timeouts(scenario, trace);
  r.oracle_par10 = oracle_par10(scenario, instances);
  r.sbs_algorithm = sbs_algorithm;
  r.sbs_par10 = par10(scenario, constant_trace(instances, sbs_algorithm));
  if (r.sbs_par10 > r.oracle_par10) r.npar10 = npar10(r.par10, r.oracle_par10, r.sbs_par10);
  return r;
}

}  // namespace asmeta
