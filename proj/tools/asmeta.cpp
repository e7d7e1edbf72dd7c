#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asmeta/error.hpp"
#include "asmeta/harness.hpp"
#include "asmeta/metrics.hpp"
#include "asmeta/scenario.hpp"
#include "asmeta/synthetic.hpp"

namespace {

using namespace asmeta;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> formats;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
}

struct ScenarioArgs {
  std::string scenario_dir;
  std::string config_path;
};

std::vector<Scenario> scenarios_from(const ScenarioArgs& args) {
  std::vector<Scenario> out;
  if (!args.scenario_dir.empty()) {
    out.push_back(load_scenario(args.scenario_dir));
  } else {
    for (const auto& src : load_config(args.config_path).scenarios) out.push_back(materialize(src));
  }
  return out;
}

std::filesystem::path output_path(const std::filesystem::path& dir, const std::string& file,
                                  const std::string& scenario, bool several) {
  return dir / (several ? scenario + "." + file : file);
}

int run_evaluate(const GlobalOptions& g, const std::string& config_path) {
  auto config = load_config(config_path);
  if (g.seed) config.seed = *g.seed;
  if (g.out) config.output_dir = *g.out;
  if (!g.formats.empty()) config.formats = g.formats;
  std::vector<ReportFormat> formats;
  for (const auto& f : config.formats) formats.push_back(parse_report_format(f));
  const auto report = run_experiment(config);
  const auto written = emit_report(report, formats, config.output_dir);
  std::cout << report_to_markdown(report);
  for (const auto& s : report.scenarios) {
    for (const auto& a : s.approaches) {
      for (const auto& f : a.folds) {
        if (f.error) std::cerr << s.scenario << " / " << a.approach << " / fold " << f.fold << ": " << *f.error << '\n';
      }
    }
  }
  for (const auto& w : written) std::cerr << "wrote " << w << '\n';
  return 0;
}

int run_sweep(const GlobalOptions& g, const ScenarioArgs& args, const std::vector<std::string>& specs,
              const std::string& agg, const std::vector<int>& folds) {
  const auto aggregation = parse_aggregation(agg);
  const std::filesystem::path dir = g.out.value_or("results");
  const auto scenarios = scenarios_from(args);
  for (const auto& s : scenarios) {
    const auto sweep = sweep_voting(s, specs, aggregation, g.seed.value_or(42), folds);
    const bool several = scenarios.size() > 1;
    write_file(output_path(dir, "sweep.csv", s.name(), several), sweep_to_csv(sweep));
    write_file(output_path(dir, "sweep.json", s.name(), several), sweep_to_json(sweep));
    const auto& best = sweep.rows[sweep.best_mask - 1];
    std::string members;
    for (const auto& m : best.members) members += (members.empty() ? "" : " + ") + m;
    std::printf("%s: %zu compositions, best: %s (train PAR10 %.4f", s.name().c_str(), sweep.rows.size(),
                members.c_str(), best.mean_train_par10);
    if (best.mean_train_npar10) std::printf(", train nPAR10 %.4f", *best.mean_train_npar10);
    if (best.mean_test_npar10) std::printf(", test nPAR10 %.4f", *best.mean_test_npar10);
    std::printf(")\n");
  }
  return 0;
}

int run_baselines(const GlobalOptions& g, const ScenarioArgs& args, std::vector<std::string> selectors,
                  std::vector<int> folds) {
  if (selectors.empty()) selectors = default_base_selectors();
  const std::filesystem::path dir = g.out.value_or("results");
  const auto scenarios = scenarios_from(args);
  for (const auto& s : scenarios) {
    const auto fold_ids = folds.empty() ? s.fold_ids() : folds;
    std::vector<BaselineFold> rows;
    for (int f : fold_ids) rows.push_back(compute_baselines(s, f, selectors, g.seed.value_or(42)));
    const auto csv = baselines_to_csv(s.name(), rows);
    write_file(output_path(dir, "baselines.csv", s.name(), scenarios.size() > 1), csv);
    std::cout << csv;
  }
  return 0;
}

int run_validate(const std::string& dir) {
  const auto s = load_scenario(dir);
  std::size_t unsolved = 0, unsolved_by_all = 0;
  for (std::size_t i = 0; i < s.num_instances(); ++i) {
    bool any = false;
    for (std::size_t a = 0; a < s.num_algorithms(); ++a) {
      const auto& r = s.run(i, a);
      if (!r.solved) {
        ++unsolved;
        if (r.runtime != s.cutoff()) throw Error(Errc::InconsistentScenario, "unsolved run not canonicalized");
      }
      any = any || r.solved;
    }
    if (!any) ++unsolved_by_all;
  }
  std::printf("scenario %s: %zu instances, %zu algorithms, %zu features, %zu folds, cutoff %g\n", s.name().c_str(),
              s.num_instances(), s.num_algorithms(), s.feature_names().size(), s.fold_ids().size(), s.cutoff());
  std::printf("unsolved runs: %zu, instances unsolved by every algorithm: %zu\n", unsolved, unsolved_by_all);
  return 0;
}

int run_generate(const GlobalOptions& g, SyntheticConfig config, const std::string& rule) {
  if (rule == "feature-sign") config.rule = SyntheticRule::FeatureSign;
  else if (rule == "uniform-random") config.rule = SyntheticRule::UniformRandom;
  else throw Error(Errc::InvalidConfig, "unknown rule '" + rule + "'");
  if (g.seed) config.seed = *g.seed;
  const auto dir = g.out.value_or(config.name);
  write_scenario(generate_synthetic(config), dir);
  std::printf("wrote %s\n", dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Algorithm selection, selector selection and selector ensembles over ASlib scenarios"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed = 42;
  std::string out;
  auto* seed_opt = app.add_option("--seed", seed, "Global random seed");
  auto* out_opt = app.add_option("--out", out, "Output directory");
  app.add_option("--format", g.formats, "Report formats: json, csv, markdown")->delimiter(',');

  std::string config_path;
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated evaluation from a JSON configuration");
  evaluate->add_option("--config,config", config_path, "Configuration file")->required();

  ScenarioArgs sweep_src;
  std::vector<std::string> sweep_specs;
  std::string sweep_agg = "maj";
  std::vector<int> sweep_folds;
  auto* sweep = app.add_subcommand("sweep-voting", "Evaluate every voting composition of the given selectors");
  auto* sw_scen = sweep->add_option("--scenario", sweep_src.scenario_dir, "ASlib scenario directory");
  auto* sw_conf = sweep->add_option("--config", sweep_src.config_path, "Configuration file providing scenarios");
  sw_scen->excludes(sw_conf);
  sweep->add_option("--spec", sweep_specs, "Member selector (repeatable)")->required();
  sweep->add_option("--agg", sweep_agg, "Aggregation: maj, wmaj, mean, borda");
  sweep->add_option("--fold", sweep_folds, "Restrict to these folds (repeatable)");

  ScenarioArgs base_src;
  std::vector<std::string> base_selectors;
  std::vector<int> base_folds;
  auto* baselines = app.add_subcommand("baselines", "Oracle, AS-oracle, SBS and SBAS PAR10 per fold");
  auto* bl_scen = baselines->add_option("--scenario", base_src.scenario_dir, "ASlib scenario directory");
  auto* bl_conf = baselines->add_option("--config", base_src.config_path, "Configuration file providing scenarios");
  bl_scen->excludes(bl_conf);
  baselines->add_option("--selector", base_selectors, "Selector considered for AS-oracle and SBAS (repeatable)");
  baselines->add_option("--fold", base_folds, "Restrict to these folds (repeatable)");

  std::string validate_dir;
  auto* validate = app.add_subcommand("validate-scenario", "Load an ASlib scenario and check its invariants");
  validate->add_option("dir", validate_dir, "Scenario directory")->required();

  SyntheticConfig synth;
  std::string synth_rule = "feature-sign";
  auto* generate = app.add_subcommand("generate-synthetic", "Write a synthetic scenario as an ASlib directory");
  generate->add_option("--instances", synth.n_instances)->capture_default_str();
  generate->add_option("--algorithms", synth.n_algorithms)->capture_default_str();
  generate->add_option("--features", synth.n_features)->capture_default_str();
  generate->add_option("--cutoff", synth.cutoff)->capture_default_str();
  generate->add_option("--rule", synth_rule, "feature-sign or uniform-random")->capture_default_str();
  generate->add_option("--noise", synth.noise_sd, "Log-normal runtime noise sd")->capture_default_str();
  generate->add_option("--folds", synth.n_folds)->capture_default_str();
  generate->add_option("--max-feature-cost", synth.max_feature_cost)->capture_default_str();
  generate->add_option("--name", synth.name)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (seed_opt->count()) g.seed = seed;
  if (out_opt->count()) g.out = out;

  try {
    if (*evaluate) return run_evaluate(g, config_path);
    if (*sweep || *baselines) {
      const auto& src = *sweep ? sweep_src : base_src;
      if (src.scenario_dir.empty() && src.config_path.empty()) {
        throw Error(Errc::InvalidConfig, "either --scenario or --config is required");
      }
      return *sweep ? run_sweep(g, sweep_src, sweep_specs, sweep_agg, sweep_folds)
                    : run_baselines(g, base_src, base_selectors, base_folds);
    }
    if (*validate) return run_validate(validate_dir);
    if (*generate) return run_generate(g, synth, synth_rule);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool config_error = e.code() == Errc::InvalidConfig || e.code() == Errc::SpecSyntax;
    return config_error ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
