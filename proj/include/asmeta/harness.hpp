#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "asmeta/aggregation.hpp"
#include "asmeta/approach.hpp"
#include "asmeta/metrics.hpp"
#include "asmeta/scenario.hpp"
#include "asmeta/synthetic.hpp"

namespace asmeta {

struct AslibSource {
  std::string path;
};

using ScenarioSource = std::variant<AslibSource, SyntheticConfig>;

struct ExperimentConfig {
  std::vector<ScenarioSource> scenarios;
  std::vector<std::string> approaches;
  /// Selectors behind the AS-oracle and SBAS reference values.
  std::vector<std::string> baseline_selectors = default_base_selectors();
  /// Empty means every fold the scenario provides.
  std::vector<int> folds;
  std::uint64_t seed = 42;
  /// Drop training instances no algorithm solves.
  bool drop_unsolved_training = false;
  std::string output_dir = "results";
  std::vector<std::string> formats = {"json", "csv", "markdown"};
};

/// Parses the JSON configuration document. Throws Error(InvalidConfig).
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

Scenario materialize(const ScenarioSource& source);

struct FoldResult {
  int fold = 0;
  /// Empty on success; otherwise the typed error that stopped this cell.
  std::optional<std::string> error;
  double par10 = 0.0;
  std::optional<double> npar10;
  std::size_t n_timeouts = 0;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
};

struct WinLoss {
  std::size_t better_or_equal = 0;
  std::size_t worse = 0;
};

struct ApproachResult {
  std::string approach;
  bool is_base = false;
  std::vector<FoldResult> folds;
  std::optional<double> mean_npar10;
  std::optional<double> median_npar10;
  /// Midrank among the scenario's ranked approaches (oracle excluded).
  std::optional<double> rank;
  /// Against the base selectors in the same run; composite approaches only.
  std::optional<WinLoss> versus_base;
};

struct BaselineFold {
  int fold = 0;
  double oracle_par10 = 0.0;
  double sbs_par10 = 0.0;
  std::string sbs_algorithm;
  double as_oracle_par10 = 0.0;
  double sbas_par10 = 0.0;
  std::string sbas_selector;
};

struct ScenarioResult {
  std::string scenario;
  std::vector<ApproachResult> approaches;
  std::vector<BaselineFold> baselines;
};

struct SummaryRow {
  std::string approach;
  std::optional<double> mean_npar10;
  std::optional<double> median_npar10;
  std::optional<double> avg_rank;
};

struct EvaluationReport {
  std::uint64_t seed = 0;
  std::vector<ScenarioResult> scenarios;
  /// Across scenarios, from the per-scenario means.
  std::vector<SummaryRow> summary;
};

/// Seed used for every approach on a given fold.
std::uint64_t fold_seed(std::uint64_t seed, int fold);

/// Cross-validated evaluation. A failing approach becomes failed cells and
/// does not stop the others.
EvaluationReport run_experiment(const ExperimentConfig& config);

/// Evaluates approaches on one loaded scenario.
ScenarioResult evaluate_scenario(const Scenario& scenario, const ExperimentConfig& config);

/// Oracle, SBS, AS-oracle and SBAS PAR10 on the held-out fold. SBAS is
/// picked by training PAR10 of the given selectors.
BaselineFold compute_baselines(const Scenario& scenario, int fold, const std::vector<std::string>& selectors,
                               std::uint64_t seed, bool drop_unsolved_training = false);

/// Median; empty input gives nullopt.
std::optional<double> median(std::vector<double> values);

/// Competition ranks with midranks for ties (1 = smallest).
std::vector<double> midranks(const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Voting composition sweep

struct SweepRow {
  std::uint32_t mask = 0;
  std::vector<std::string> members;
  // per fold; nPAR10 is absent on folds whose oracle/SBS gap is zero
  std::vector<double> train_par10;
  std::vector<std::optional<double>> train_npar10;
  std::vector<std::optional<double>> test_npar10;
  double mean_train_par10 = 0.0;
  std::optional<double> mean_train_npar10;
  std::optional<double> mean_test_npar10;
  std::optional<double> median_test_npar10;
};

struct SweepFold {
  int fold = 0;
  std::vector<std::size_t> train_instances;
  std::vector<std::size_t> test_instances;
  /// outputs[j][r]: member j on the r-th train/test instance.
  std::vector<std::vector<SelectorOutput>> train_outputs;
  std::vector<std::vector<SelectorOutput>> test_outputs;
  std::vector<bool> needs_features;
  std::size_t sbs_algorithm = 0;
};

struct SweepResult {
  std::vector<std::string> specs;
  Aggregation aggregation = Aggregation::Majority;
  std::vector<SweepRow> rows;
  /// Composition with the lowest mean training nPAR10 over the folds where
  /// it is defined (mean training PAR10 if it is defined on none).
  std::uint32_t best_mask = 0;
  std::vector<SweepFold> folds;
};

/// Evaluates every non-empty voting composition of `specs` on every fold
/// with members trained once per fold.
SweepResult sweep_voting(const Scenario& scenario, const std::vector<std::string>& specs, Aggregation aggregation,
                         std::uint64_t seed, const std::vector<int>& folds = {});

// ---------------------------------------------------------------------------
// Report emission

enum class ReportFormat { Json, Csv, Markdown };

ReportFormat parse_report_format(const std::string& name);

std::string report_to_json(const EvaluationReport& report);
std::string report_to_csv(const EvaluationReport& report);
std::string report_to_markdown(const EvaluationReport& report);
/// Wall-clock fit/predict seconds per cell; kept out of the JSON report so
/// that it stays byte-identical across runs.
std::string timings_to_csv(const EvaluationReport& report);

/// Writes report.{json,csv,md} and timings.csv into `dir`. Returns the
/// written paths. Throws Error(IoError).
std::vector<std::string> emit_report(const EvaluationReport& report, const std::vector<ReportFormat>& formats,
                                     const std::string& dir);

std::string sweep_to_csv(const SweepResult& sweep);
std::string sweep_to_json(const SweepResult& sweep);

std::string baselines_to_csv(const std::string& scenario, const std::vector<BaselineFold>& folds);

}  // namespace asmeta
