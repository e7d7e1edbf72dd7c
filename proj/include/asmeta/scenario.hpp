#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace asmeta {

/// Marker for a missing feature value.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct RunRecord {
  double runtime = 0.0;
  bool solved = false;

  bool operator==(const RunRecord&) const = default;
};

/// An algorithm selection scenario: instances x algorithms runtime matrix
/// with a cutoff, instance features, feature costs and a fold assignment.
///
/// Instances and algorithms are addressed by their index in declaration
/// order everywhere in the library; the ids are kept for reporting only.
/// Once constructed a Scenario is treated as immutable.
class Scenario {
 public:
  Scenario() = default;

  /// Builds and validates a scenario. Runs are canonicalized: a run that is
  /// unsolved or exceeds the cutoff is stored as (cutoff, unsolved).
  /// Throws Error(InconsistentScenario) on shape or fold violations.
  Scenario(std::string name, std::vector<std::string> instances, std::vector<std::string> algorithms,
           double cutoff, std::vector<RunRecord> runs, std::vector<std::string> feature_names,
           std::vector<std::vector<double>> features, std::vector<double> feature_cost,
           std::vector<int> folds);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& instances() const { return instances_; }
  const std::vector<std::string>& algorithms() const { return algorithms_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  std::size_t num_instances() const { return instances_.size(); }
  std::size_t num_algorithms() const { return algorithms_.size(); }
  std::size_t num_features() const { return feature_names_.size(); }
  double cutoff() const { return cutoff_; }

  const RunRecord& run(std::size_t instance, std::size_t algorithm) const {
    return runs_[instance * algorithms_.size() + algorithm];
  }
  std::span<const double> features(std::size_t instance) const { return features_[instance]; }
  double feature_cost(std::size_t instance) const { return feature_cost_[instance]; }
  int fold(std::size_t instance) const { return folds_[instance]; }

  /// Sorted distinct fold ids.
  std::vector<int> fold_ids() const;
  std::vector<std::size_t> instances_in_fold(int fold) const;
  std::vector<std::size_t> instances_not_in_fold(int fold) const;
  std::vector<std::size_t> all_instances() const;

  /// Penalized cost of running `algorithm` on `instance` without feature cost.
  double pr10(std::size_t instance, std::size_t algorithm) const;

  std::size_t algorithm_index(const std::string& id) const;
  std::size_t instance_index(const std::string& id) const;

  bool operator==(const Scenario&) const;

 private:
  std::string name_;
  std::vector<std::string> instances_;
  std::vector<std::string> algorithms_;
  double cutoff_ = 0.0;
  std::vector<RunRecord> runs_;
  std::vector<std::string> feature_names_;
  std::vector<std::vector<double>> features_;
  std::vector<double> feature_cost_;
  std::vector<int> folds_;
};

/// Reads an ASlib scenario directory (description.txt, algorithm_runs.arff,
/// feature_values.arff, cv.arff, optional feature_costs.arff).
Scenario load_scenario(const std::string& dir);

/// Writes an ASlib-style directory that load_scenario reads back.
void write_scenario(const Scenario& scenario, const std::string& dir);

}  // namespace asmeta
