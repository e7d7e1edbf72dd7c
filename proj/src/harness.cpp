#include "asmeta/harness.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "asmeta/ensembles.hpp"
#include "asmeta/error.hpp"

namespace asmeta {
namespace {

using json = nlohmann::json;

[[noreturn]] void bad_config(const std::string& why) { throw Error(Errc::InvalidConfig, why); }

SyntheticConfig parse_synthetic(const json& j) {
  static const std::set<std::string> known = {"n_instances", "n_algorithms", "n_features", "cutoff",
                                              "noise_sd",    "seed",         "n_folds",    "max_feature_cost",
                                              "name",        "rule"};
  if (!j.is_object()) bad_config("'synthetic' must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) bad_config("unknown synthetic key '" + k + "'");
  }
  SyntheticConfig c;
  auto size = [&](const char* key, std::size_t& out) {
    if (!j.contains(key)) return;
    const auto v = j.at(key).get<long long>();
    if (v <= 0) bad_config(std::string("synthetic.") + key + " must be positive");
    out = static_cast<std::size_t>(v);
  };
  size("n_instances", c.n_instances);
  size("n_algorithms", c.n_algorithms);
  size("n_features", c.n_features);
  if (j.contains("cutoff")) c.cutoff = j.at("cutoff").get<double>();
  if (j.contains("noise_sd")) c.noise_sd = j.at("noise_sd").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("n_folds")) c.n_folds = j.at("n_folds").get<int>();
  if (j.contains("max_feature_cost")) c.max_feature_cost = j.at("max_feature_cost").get<double>();
  if (j.contains("name")) c.name = j.at("name").get<std::string>();
  if (j.contains("rule")) {
    const auto rule = j.at("rule").get<std::string>();
    if (rule == "feature-sign") c.rule = SyntheticRule::FeatureSign;
    else if (rule == "uniform-random") c.rule = SyntheticRule::UniformRandom;
    else bad_config("synthetic.rule must be 'feature-sign' or 'uniform-random'");
  }
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct FittedSelector {
  SelectorPtr selector;
  double fit_seconds = 0.0;
};

// Fitted selectors of one fold, shared between approach cells and the
// baseline computation. Fitting is deterministic, so reuse is exact.
class FoldCache {
 public:
  FoldCache(const TrainingData& data, std::uint64_t seed) : data_(data), seed_(seed) {}

  const FittedSelector& get(const ApproachSpec& spec) {
    const auto key = to_string(spec);
    auto it = fitted_.find(key);
    if (it != fitted_.end()) return it->second;
    const auto t0 = std::chrono::steady_clock::now();
    auto sel = make_factory(spec)(data_, seed_);
    return fitted_.emplace(key, FittedSelector{std::move(sel), seconds_since(t0)}).first->second;
  }

 private:
  const TrainingData& data_;
  std::uint64_t seed_;
  std::map<std::string, FittedSelector> fitted_;
};

SelectionTrace run_selector(const Scenario& scenario, const Selector& selector,
                            std::span<const std::size_t> instances) {
  SelectionTrace trace;
  trace.reserve(instances.size());
  const bool charge = selector.needs_features();
  for (auto i : instances) {
    trace.push_back({i, selector.select(scenario.features(i)), charge ? scenario.feature_cost(i) : 0.0});
  }
  return trace;
}

std::vector<std::size_t> training_instances(const Scenario& scenario, int fold, bool drop_unsolved) {
  auto train = scenario.instances_not_in_fold(fold);
  if (drop_unsolved) {
    std::erase_if(train, [&](std::size_t i) {
      for (std::size_t a = 0; a < scenario.num_algorithms(); ++a)
        if (scenario.run(i, a).solved) return false;
      return true;
    });
  }
  if (train.empty()) throw Error(Errc::EmptyInstanceSet, "fold " + std::to_string(fold) + " leaves no training data");
  return train;
}

std::vector<int> resolve_folds(const Scenario& scenario, const std::vector<int>& requested) {
  const auto available = scenario.fold_ids();
  if (requested.empty()) return available;
  for (int f : requested) {
    if (std::find(available.begin(), available.end(), f) == available.end()) {
      bad_config("fold " + std::to_string(f) + " does not exist in scenario " + scenario.name());
    }
  }
  return requested;
}

std::optional<BaselineFold> baselines_with_cache(const Scenario& scenario, int fold,
                                                 std::span<const std::size_t> train,
                                                 std::span<const std::size_t> test,
                                                 const std::vector<ApproachSpec>& selectors, FoldCache& cache) {
  std::vector<SelectionTrace> test_traces;
  std::vector<double> train_par10;
  std::vector<std::string> names;
  for (const auto& spec : selectors) {
    try {
      const auto& fitted = cache.get(spec);
      train_par10.push_back(par10(scenario, run_selector(scenario, *fitted.selector, train)));
      test_traces.push_back(run_selector(scenario, *fitted.selector, test));
      names.push_back(to_string(spec));
    } catch (const Error&) {
      // a selector that cannot be trained on this fold drops out of the reference set
    }
  }
  if (test_traces.empty()) return std::nullopt;
  BaselineFold b;
  b.fold = fold;
  b.oracle_par10 = oracle_par10(scenario, test);
  const auto sbs_alg = sbs(scenario, train);
  b.sbs_algorithm = scenario.algorithms()[sbs_alg];
  b.sbs_par10 = par10(scenario, constant_trace(test, sbs_alg));
  b.as_oracle_par10 = as_oracle_par10(scenario, test_traces);
  const auto best = sbas(train_par10);
  b.sbas_selector = names[best];
  b.sbas_par10 = par10(scenario, test_traces[best]);
  return b;
}

}  // namespace

std::uint64_t fold_seed(std::uint64_t seed, int fold) {
  return seed + 1000003ULL * static_cast<std::uint64_t>(fold);
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> midranks(const std::vector<double>& values) { return ranks_from_scores(values); }

static ExperimentConfig parse_config_with_base(const std::string& text, const std::filesystem::path& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad_config(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad_config("configuration must be a JSON object");
  static const std::set<std::string> known = {"seed", "scenarios", "approaches", "baseline_selectors",
                                              "folds", "drop_unsolved_training", "output"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) bad_config("unknown configuration key '" + k + "'");
  }
  ExperimentConfig c;
  try {
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (!j.contains("scenarios") || !j.at("scenarios").is_array() || j.at("scenarios").empty()) {
      bad_config("'scenarios' must be a non-empty array");
    }
    for (const auto& s : j.at("scenarios")) {
      if (s.contains("aslib")) {
        std::filesystem::path p(s.at("aslib").get<std::string>());
        if (p.is_relative() && !base.empty()) p = base / p;
        c.scenarios.emplace_back(AslibSource{p.lexically_normal().string()});
      } else if (s.contains("synthetic")) {
        c.scenarios.emplace_back(parse_synthetic(s.at("synthetic")));
      } else {
        bad_config("each scenario needs an 'aslib' or 'synthetic' entry");
      }
    }
    if (j.contains("approaches")) c.approaches = j.at("approaches").get<std::vector<std::string>>();
    if (j.contains("baseline_selectors")) {
      c.baseline_selectors = j.at("baseline_selectors").get<std::vector<std::string>>();
    }
    if (j.contains("folds")) c.folds = j.at("folds").get<std::vector<int>>();
    if (j.contains("drop_unsolved_training")) c.drop_unsolved_training = j.at("drop_unsolved_training").get<bool>();
    if (j.contains("output")) {
      const auto& o = j.at("output");
      if (o.contains("dir")) c.output_dir = o.at("dir").get<std::string>();
      if (o.contains("formats")) c.formats = o.at("formats").get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    bad_config(std::string("configuration has a wrongly typed value: ") + e.what());
  }
  for (const auto& a : c.approaches) {
    try {
      parse_approach(a);
    } catch (const Error& e) {
      bad_config(e.what());
    }
  }
  for (const auto& a : c.baseline_selectors) {
    try {
      if (parse_approach(a).kind == ApproachSpec::Kind::Oracle) bad_config("'oracle' cannot be a baseline selector");
    } catch (const Error& e) {
      if (e.code() == Errc::InvalidConfig) throw;
      bad_config(e.what());
    }
  }
  for (const auto& f : c.formats) parse_report_format(f);
  return c;
}

ExperimentConfig parse_config(const std::string& json_text) { return parse_config_with_base(json_text, {}); }

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_config("cannot read configuration " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_with_base(buf.str(), std::filesystem::path(path).parent_path());
}

Scenario materialize(const ScenarioSource& source) {
  if (const auto* a = std::get_if<AslibSource>(&source)) return load_scenario(a->path);
  return generate_synthetic(std::get<SyntheticConfig>(source));
}

ScenarioResult evaluate_scenario(const Scenario& scenario, const ExperimentConfig& config) {
  const auto folds = resolve_folds(scenario, config.folds);
  std::vector<ApproachSpec> specs;
  for (const auto& a : config.approaches) specs.push_back(parse_approach(a));
  std::vector<ApproachSpec> baseline_specs;
  for (const auto& a : config.baseline_selectors) baseline_specs.push_back(parse_approach(a));

  ScenarioResult result;
  result.scenario = scenario.name();
  for (std::size_t a = 0; a < specs.size(); ++a) {
    ApproachResult r;
    r.approach = config.approaches[a];
    r.is_base = is_base_selector(specs[a]);
    result.approaches.push_back(std::move(r));
  }

  for (int fold : folds) {
    const auto test = scenario.instances_in_fold(fold);
    const auto train = training_instances(scenario, fold, config.drop_unsolved_training);
    const auto sbs_alg = sbs(scenario, train);
    const auto data = make_training_data(scenario, train);
    FoldCache cache(data, fold_seed(config.seed, fold));

    for (std::size_t a = 0; a < specs.size(); ++a) {
      FoldResult fr;
      fr.fold = fold;
      try {
        SelectionTrace trace;
        if (specs[a].kind == ApproachSpec::Kind::Oracle) {
          trace = oracle_trace(scenario, test);
        } else {
          const auto& fitted = cache.get(specs[a]);
          fr.fit_seconds = fitted.fit_seconds;
          const auto t0 = std::chrono::steady_clock::now();
          trace = run_selector(scenario, *fitted.selector, test);
          fr.predict_seconds = seconds_since(t0);
        }
        const auto rep = score(scenario, trace, sbs_alg);
        fr.par10 = rep.par10;
        fr.npar10 = rep.npar10;
        fr.n_timeouts = rep.n_timeouts;
      } catch (const Error& e) {
        fr.error = e.what();
      }
      result.approaches[a].folds.push_back(std::move(fr));
    }

    if (auto b = baselines_with_cache(scenario, fold, train, test, baseline_specs, cache)) {
      result.baselines.push_back(*b);
    }
  }

  for (auto& r : result.approaches) {
    std::vector<double> values;
    for (const auto& f : r.folds)
      if (!f.error && f.npar10) values.push_back(*f.npar10);
    if (!values.empty()) {
      r.mean_npar10 = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
      r.median_npar10 = median(values);
    }
  }

  std::vector<std::size_t> ranked;
  std::vector<double> means;
  for (std::size_t a = 0; a < specs.size(); ++a) {
    if (specs[a].kind == ApproachSpec::Kind::Oracle || !result.approaches[a].mean_npar10) continue;
    ranked.push_back(a);
    means.push_back(*result.approaches[a].mean_npar10);
  }
  const auto ranks = midranks(means);
  for (std::size_t k = 0; k < ranked.size(); ++k) result.approaches[ranked[k]].rank = ranks[k];

  for (std::size_t a = 0; a < specs.size(); ++a) {
    auto& r = result.approaches[a];
    if (r.is_base || specs[a].kind == ApproachSpec::Kind::Oracle || !r.mean_npar10) continue;
    WinLoss wl;
    for (std::size_t b = 0; b < specs.size(); ++b) {
      const auto& other = result.approaches[b];
      if (!other.is_base || specs[b].name == "sbs" || !other.mean_npar10) continue;
      (*r.mean_npar10 <= *other.mean_npar10 ? wl.better_or_equal : wl.worse)++;
    }
    r.versus_base = wl;
  }
  return result;
}

EvaluationReport run_experiment(const ExperimentConfig& config) {
  EvaluationReport report;
  report.seed = config.seed;
  for (const auto& source : config.scenarios) {
    report.scenarios.push_back(evaluate_scenario(materialize(source), config));
  }
  for (std::size_t a = 0; a < config.approaches.size(); ++a) {
    SummaryRow row;
    row.approach = config.approaches[a];
    std::vector<double> means, ranks;
    for (const auto& s : report.scenarios) {
      const auto& r = s.approaches[a];
      if (r.mean_npar10) means.push_back(*r.mean_npar10);
      if (r.rank) ranks.push_back(*r.rank);
    }
    if (!means.empty()) {
      row.mean_npar10 = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
      row.median_npar10 = median(means);
    }
    if (!ranks.empty()) {
      row.avg_rank = std::accumulate(ranks.begin(), ranks.end(), 0.0) / static_cast<double>(ranks.size());
    }
    report.summary.push_back(std::move(row));
  }
  return report;
}

BaselineFold compute_baselines(const Scenario& scenario, int fold, const std::vector<std::string>& selectors,
                               std::uint64_t seed, bool drop_unsolved_training) {
  resolve_folds(scenario, {fold});
  std::vector<ApproachSpec> specs;
  for (const auto& s : selectors) specs.push_back(parse_approach(s));
  const auto test = scenario.instances_in_fold(fold);
  const auto train = training_instances(scenario, fold, drop_unsolved_training);
  const auto data = make_training_data(scenario, train);
  FoldCache cache(data, fold_seed(seed, fold));
  auto b = baselines_with_cache(scenario, fold, train, test, specs, cache);
  if (!b) throw Error(Errc::DegenerateTraining, "no baseline selector could be trained on fold " + std::to_string(fold));
  return *b;
}

SweepResult sweep_voting(const Scenario& scenario, const std::vector<std::string>& specs, Aggregation aggregation,
                         std::uint64_t seed, const std::vector<int>& requested_folds) {
  if (specs.empty()) throw Error(Errc::InvalidConfig, "sweep needs at least one selector");
  if (specs.size() > kMaxExhaustiveMembers) {
    throw Error(Errc::InvalidConfig, "sweep is limited to " + std::to_string(kMaxExhaustiveMembers) + " selectors");
  }
  std::vector<SelectorFactory> factories;
  for (const auto& s : specs) factories.push_back(make_factory(parse_approach(s)));
  const auto folds = resolve_folds(scenario, requested_folds);
  const auto m = specs.size();
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;

  SweepResult result;
  result.specs = specs;
  result.aggregation = aggregation;
  result.rows.resize(full);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    auto& row = result.rows[mask - 1];
    row.mask = mask;
    for (std::size_t j = 0; j < m; ++j)
      if ((mask >> j) & 1U) row.members.push_back(specs[j]);
  }

  for (int fold : folds) {
    SweepFold sf;
    sf.fold = fold;
    sf.test_instances = scenario.instances_in_fold(fold);
    sf.train_instances = scenario.instances_not_in_fold(fold);
    sf.sbs_algorithm = sbs(scenario, sf.train_instances);
    const auto data = make_training_data(scenario, sf.train_instances);
    const auto fseed = fold_seed(seed, fold);

    std::vector<SelectorPtr> members;
    for (std::size_t j = 0; j < m; ++j) members.push_back(factories[j](data, member_seed(fseed, j)));
    std::vector<double> weights(m, 1.0);
    if (aggregation == Aggregation::WeightedMajority) weights = npar10_weights(data, members);

    auto outputs_on = [&](std::span<const std::size_t> instances) {
      std::vector<std::vector<SelectorOutput>> out(m);
      for (std::size_t j = 0; j < m; ++j) {
        for (auto i : instances) {
          auto s = members[j]->scores(scenario.features(i));
          const auto sel = argmin(s);
          out[j].push_back({sel, std::move(s), weights[j]});
        }
      }
      return out;
    };
    sf.train_outputs = outputs_on(sf.train_instances);
    sf.test_outputs = outputs_on(sf.test_instances);
    for (const auto& mem : members) sf.needs_features.push_back(mem->needs_features());

    const auto search = search_compositions(data, sf.train_outputs, sf.needs_features, aggregation);
    const double test_oracle = oracle_par10(scenario, sf.test_instances);
    const double test_sbs = par10(scenario, constant_trace(sf.test_instances, sf.sbs_algorithm));
    std::vector<SelectorOutput> picked;
    for (const auto& entry : search.evaluated) {
      auto& row = result.rows[entry.mask - 1];
      row.train_par10.push_back(entry.train_par10);
      row.train_npar10.push_back(entry.train_npar10);
      bool charge = false;
      for (std::size_t j = 0; j < m; ++j) charge = charge || (((entry.mask >> j) & 1U) && sf.needs_features[j]);
      SelectionTrace trace;
      for (std::size_t r = 0; r < sf.test_instances.size(); ++r) {
        picked.clear();
        for (std::size_t j = 0; j < m; ++j)
          if ((entry.mask >> j) & 1U) picked.push_back(sf.test_outputs[j][r]);
        const auto i = sf.test_instances[r];
        trace.push_back({i, aggregate(aggregation, picked), charge ? scenario.feature_cost(i) : 0.0});
      }
      row.test_npar10.push_back(test_sbs > test_oracle
                                    ? std::optional<double>(npar10(par10(scenario, trace), test_oracle, test_sbs))
                                    : std::nullopt);
    }
    result.folds.push_back(std::move(sf));
  }

  auto mean_of_present = [](const std::vector<std::optional<double>>& values) -> std::optional<double> {
    std::vector<double> present;
    for (const auto& v : values)
      if (v) present.push_back(*v);
    if (present.empty()) return std::nullopt;
    return std::accumulate(present.begin(), present.end(), 0.0) / static_cast<double>(present.size());
  };
  bool have_best = false;
  double best = 0.0;
  bool any_train_gap = false;
  for (auto& row : result.rows) {
    row.mean_train_npar10 = mean_of_present(row.train_npar10);
    row.mean_train_par10 =
        std::accumulate(row.train_par10.begin(), row.train_par10.end(), 0.0) / static_cast<double>(row.train_par10.size());
    any_train_gap = any_train_gap || row.mean_train_npar10.has_value();
  }
  for (auto& row : result.rows) {
    const double key = any_train_gap ? *row.mean_train_npar10 : row.mean_train_par10;
    std::vector<double> test;
    for (const auto& v : row.test_npar10)
      if (v) test.push_back(*v);
    if (!test.empty()) {
      row.mean_test_npar10 = std::accumulate(test.begin(), test.end(), 0.0) / static_cast<double>(test.size());
      row.median_test_npar10 = median(test);
    }
    if (!have_best || key < best || (key == best && composition_before(row.mask, result.best_mask))) {
      have_best = true;
      best = key;
      result.best_mask = row.mask;
    }
  }
  return result;
}

}  // namespace asmeta
