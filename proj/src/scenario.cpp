#include "asmeta/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "asmeta/arff.hpp"
#include "asmeta/error.hpp"

namespace asmeta {
namespace fs = std::filesystem;

Scenario::Scenario(std::string name, std::vector<std::string> instances,
                   std::vector<std::string> algorithms, double cutoff, std::vector<RunRecord> runs,
                   std::vector<std::string> feature_names, std::vector<std::vector<double>> features,
                   std::vector<double> feature_cost, std::vector<int> folds)
    : name_(std::move(name)),
      instances_(std::move(instances)),
      algorithms_(std::move(algorithms)),
      cutoff_(cutoff),
      runs_(std::move(runs)),
      feature_names_(std::move(feature_names)),
      features_(std::move(features)),
      feature_cost_(std::move(feature_cost)),
      folds_(std::move(folds)) {
  const auto n = instances_.size();
  const auto k = algorithms_.size();
  auto fail = [](const std::string& why) { throw Error(Errc::InconsistentScenario, why); };
  if (!(cutoff_ > 0.0) || !std::isfinite(cutoff_)) fail("cutoff must be a positive number");
  if (n == 0) fail("scenario has no instances");
  if (k == 0) fail("scenario has no algorithms");
  if (runs_.size() != n * k) fail("performance matrix does not cover every (instance, algorithm) pair");
  if (features_.size() != n) fail("feature matrix row count differs from instance count");
  for (const auto& row : features_) {
    if (row.size() != feature_names_.size()) fail("feature vectors have inconsistent length");
  }
  if (feature_cost_.empty()) feature_cost_.assign(n, 0.0);
  if (feature_cost_.size() != n) fail("feature cost count differs from instance count");
  for (double c : feature_cost_) {
    if (!(c >= 0.0) || !std::isfinite(c)) fail("feature costs must be finite and non-negative");
  }
  if (folds_.size() != n) fail("fold assignment does not cover every instance");
  if (std::set<std::string>(instances_.begin(), instances_.end()).size() != n) fail("duplicate instance id");
  if (std::set<std::string>(algorithms_.begin(), algorithms_.end()).size() != k) fail("duplicate algorithm id");
  for (auto& r : runs_) {
    if (!(r.runtime >= 0.0) || !r.solved || r.runtime > cutoff_) {
      if (r.runtime < 0.0 && r.solved) fail("negative runtime");
      r = RunRecord{cutoff_, false};
    }
  }
}

std::vector<int> Scenario::fold_ids() const {
  std::set<int> ids(folds_.begin(), folds_.end());
  return {ids.begin(), ids.end()};
}

std::vector<std::size_t> Scenario::instances_in_fold(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < folds_.size(); ++i)
    if (folds_[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> Scenario::instances_not_in_fold(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < folds_.size(); ++i)
    if (folds_[i] != fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> Scenario::all_instances() const {
  std::vector<std::size_t> out(instances_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

double Scenario::pr10(std::size_t instance, std::size_t algorithm) const {
  if (instance >= instances_.size()) throw Error(Errc::UnknownInstance, std::to_string(instance));
  if (algorithm >= algorithms_.size()) throw Error(Errc::UnknownAlgorithm, std::to_string(algorithm));
  const auto& r = run(instance, algorithm);
  return r.solved ? r.runtime : 10.0 * cutoff_;
}

std::size_t Scenario::algorithm_index(const std::string& id) const {
  const auto it = std::find(algorithms_.begin(), algorithms_.end(), id);
  if (it == algorithms_.end()) throw Error(Errc::UnknownAlgorithm, id);
  return static_cast<std::size_t>(it - algorithms_.begin());
}

std::size_t Scenario::instance_index(const std::string& id) const {
  const auto it = std::find(instances_.begin(), instances_.end(), id);
  if (it == instances_.end()) throw Error(Errc::UnknownInstance, id);
  return static_cast<std::size_t>(it - instances_.begin());
}

bool Scenario::operator==(const Scenario& o) const {
  if (name_ != o.name_ || instances_ != o.instances_ || algorithms_ != o.algorithms_ ||
      cutoff_ != o.cutoff_ || runs_ != o.runs_ || feature_names_ != o.feature_names_ ||
      feature_cost_ != o.feature_cost_ || folds_ != o.folds_)
    return false;
  for (std::size_t i = 0; i < features_.size(); ++i) {
    for (std::size_t j = 0; j < features_[i].size(); ++j) {
      const double a = features_[i][j];
      const double b = o.features_[i][j];
      if (!(a == b || (std::isnan(a) && std::isnan(b)))) return false;
    }
  }
  return true;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Flat "key: value" reader. A key with an empty value followed by "- item"
// lines takes the first list item; nested mappings are ignored.
std::map<std::string, std::string> read_description(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::string pending_list_key;
  while (std::getline(in, line)) {
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const bool indented = line.front() == ' ' || line.front() == '\t' || line.front() == '-';
    if (indented) {
      const auto t = trim(line);
      if (!pending_list_key.empty() && t.front() == '-') {
        auto item = trim(t.substr(1));
        if (!kv.count(pending_list_key) || kv[pending_list_key].empty()) kv[pending_list_key] = item;
      }
      continue;
    }
    pending_list_key.clear();
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    auto key = lower(trim(line.substr(0, colon)));
    auto value = trim(line.substr(colon + 1));
    if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
      value = trim(value.substr(1, value.size() - 2));
      value = trim(value.substr(0, value.find(',')));
    }
    if (value.empty()) pending_list_key = key;
    kv[key] = value;
  }
  return kv;
}

std::size_t require_column(const arff::Table& t, const std::string& name, const std::string& file) {
  const auto idx = t.find_attribute(name);
  if (!idx) throw Error(Errc::InconsistentScenario, file + " has no '" + name + "' column");
  return *idx;
}

std::string cell_text(const arff::Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* d = std::get_if<double>(&v)) {
    std::ostringstream os;
    os << *d;
    return os.str();
  }
  return {};
}

double cell_number(const arff::Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* s = std::get_if<std::string>(&v)) {
    try {
      return std::stod(*s);
    } catch (...) {
      return kMissing;
    }
  }
  return kMissing;
}

// Rows whose repetition column is absent, missing or equal to 1.
bool first_repetition(const arff::Table& t, const std::vector<arff::Value>& row) {
  const auto rep = t.find_attribute("repetition");
  if (!rep || arff::is_missing(row[*rep])) return true;
  return cell_number(row[*rep]) == 1.0;
}

}  // namespace

Scenario load_scenario(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw Error(Errc::IoError, "not a directory: " + dir);

  const auto desc = read_description((root / "description.txt").string());
  auto get = [&](const std::string& key) -> std::string {
    const auto it = desc.find(key);
    return it == desc.end() ? std::string() : it->second;
  };
  const auto maximize = lower(get("maximize"));
  if (maximize == "true" || maximize == "yes") {
    throw Error(Errc::InconsistentScenario, "maximization scenarios are not supported");
  }
  double cutoff = 0.0;
  try {
    cutoff = std::stod(get("algorithm_cutoff_time"));
  } catch (...) {
    throw Error(Errc::InconsistentScenario, "description.txt lacks a numeric algorithm_cutoff_time");
  }
  std::string measure = get("performance_measure");
  if (measure.empty()) measure = get("performance_measures");
  std::string name = get("scenario_id");
  if (name.empty()) name = root.filename().string();
  if (name.empty()) name = root.parent_path().filename().string();

  // cv.arff defines the instance universe and its order
  const auto cv = arff::read_file((root / "cv.arff").string());
  const auto cv_inst = require_column(cv, "instance_id", "cv.arff");
  const auto cv_fold = require_column(cv, "fold", "cv.arff");
  std::vector<std::string> instances;
  std::vector<int> folds;
  std::unordered_map<std::string, std::size_t> instance_pos;
  for (const auto& row : cv.rows) {
    if (!first_repetition(cv, row)) continue;
    const auto id = cell_text(row[cv_inst]);
    if (instance_pos.count(id)) continue;
    const double f = cell_number(row[cv_fold]);
    if (std::isnan(f)) throw Error(Errc::InconsistentScenario, "cv.arff: missing fold for " + id);
    instance_pos.emplace(id, instances.size());
    instances.push_back(id);
    folds.push_back(static_cast<int>(f));
  }

  const auto runs_tbl = arff::read_file((root / "algorithm_runs.arff").string());
  const auto r_inst = require_column(runs_tbl, "instance_id", "algorithm_runs.arff");
  const auto r_alg = require_column(runs_tbl, "algorithm", "algorithm_runs.arff");
  const auto r_status = require_column(runs_tbl, "runstatus", "algorithm_runs.arff");
  std::optional<std::size_t> r_perf;
  if (!measure.empty()) r_perf = runs_tbl.find_attribute(measure);
  if (!r_perf) {
    for (std::size_t c = 0; c < runs_tbl.attributes.size(); ++c) {
      const auto& a = runs_tbl.attributes[c];
      if (a.kind == arff::AttributeKind::Numeric && lower(a.name) != "repetition") {
        r_perf = c;
        break;
      }
    }
  }
  if (!r_perf) throw Error(Errc::InconsistentScenario, "algorithm_runs.arff has no performance column");

  std::vector<std::string> algorithms;
  std::unordered_map<std::string, std::size_t> algorithm_pos;
  struct Entry {
    std::size_t instance, algorithm;
    RunRecord record;
  };
  std::vector<Entry> entries;
  std::set<std::string> run_instances;
  for (const auto& row : runs_tbl.rows) {
    const auto inst = cell_text(row[r_inst]);
    run_instances.insert(inst);
    if (!first_repetition(runs_tbl, row)) continue;
    const auto alg = cell_text(row[r_alg]);
    if (!algorithm_pos.count(alg)) {
      algorithm_pos.emplace(alg, algorithms.size());
      algorithms.push_back(alg);
    }
    const auto it = instance_pos.find(inst);
    if (it == instance_pos.end()) {
      throw Error(Errc::InconsistentScenario, "instance '" + inst + "' has runs but no fold in cv.arff");
    }
    const auto status = lower(cell_text(row[r_status]));
    const double runtime = cell_number(row[*r_perf]);
    const bool solved = status == "ok" && !std::isnan(runtime);
    entries.push_back({it->second, algorithm_pos[alg], RunRecord{solved ? runtime : cutoff, solved}});
  }
  for (const auto& id : instances) {
    if (!run_instances.count(id)) {
      throw Error(Errc::InconsistentScenario, "instance '" + id + "' is in cv.arff but has no runs");
    }
  }

  const auto n = instances.size();
  const auto k = algorithms.size();
  // missing pairs are imputed as timeouts at the cutoff
  std::vector<RunRecord> runs(n * k, RunRecord{cutoff, false});
  std::vector<bool> seen(n * k, false);
  for (const auto& e : entries) {
    const auto idx = e.instance * k + e.algorithm;
    if (seen[idx]) continue;
    seen[idx] = true;
    runs[idx] = e.record;
  }

  const auto fv = arff::read_file((root / "feature_values.arff").string());
  const auto f_inst = require_column(fv, "instance_id", "feature_values.arff");
  std::vector<std::size_t> feature_cols;
  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < fv.attributes.size(); ++c) {
    const auto l = lower(fv.attributes[c].name);
    if (c == f_inst || l == "repetition") continue;
    feature_cols.push_back(c);
    feature_names.push_back(fv.attributes[c].name);
  }
  std::vector<std::vector<double>> features(n, std::vector<double>(feature_cols.size(), kMissing));
  std::vector<bool> has_features(n, false);
  for (const auto& row : fv.rows) {
    if (!first_repetition(fv, row)) continue;
    const auto it = instance_pos.find(cell_text(row[f_inst]));
    if (it == instance_pos.end() || has_features[it->second]) continue;
    has_features[it->second] = true;
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      features[it->second][j] = cell_number(row[feature_cols[j]]);
    }
  }

  std::vector<double> feature_cost(n, 0.0);
  const auto cost_path = root / "feature_costs.arff";
  if (fs::exists(cost_path)) {
    const auto fc = arff::read_file(cost_path.string());
    const auto c_inst = require_column(fc, "instance_id", "feature_costs.arff");
    std::vector<bool> has_cost(n, false);
    for (const auto& row : fc.rows) {
      if (!first_repetition(fc, row)) continue;
      const auto it = instance_pos.find(cell_text(row[c_inst]));
      if (it == instance_pos.end() || has_cost[it->second]) continue;
      has_cost[it->second] = true;
      double total = 0.0;
      for (std::size_t c = 0; c < fc.attributes.size(); ++c) {
        if (c == c_inst || lower(fc.attributes[c].name) == "repetition") continue;
        const double v = cell_number(row[c]);
        if (!std::isnan(v)) total += v;
      }
      feature_cost[it->second] = total;
    }
  }

  return Scenario(std::move(name), std::move(instances), std::move(algorithms), cutoff,
                  std::move(runs), std::move(feature_names), std::move(features),
                  std::move(feature_cost), std::move(folds));
}

void write_scenario(const Scenario& s, const std::string& dir) {
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir + ": " + ec.message());

  {
    std::ofstream out(root / "description.txt");
    if (!out) throw Error(Errc::IoError, "cannot write description.txt in " + dir);
    char cutoff[64];
    std::snprintf(cutoff, sizeof cutoff, "%.17g", s.cutoff());
    out << "scenario_id: " << s.name() << "\n"
        << "performance_measure: runtime\n"
        << "maximize: false\n"
        << "performance_type: runtime\n"
        << "algorithm_cutoff_time: " << cutoff << "\n"
        << "algorithm_cutoff_memory: ?\n"
        << "features_cutoff_time: ?\n"
        << "features_cutoff_memory: ?\n";
  }

  using arff::Attribute;
  using arff::AttributeKind;
  const Attribute inst_attr{"instance_id", AttributeKind::String, {}};
  const Attribute rep_attr{"repetition", AttributeKind::Numeric, {}};

  arff::Table runs{"algorithm_runs", {inst_attr, rep_attr, {"algorithm", AttributeKind::String, {}},
                                     {"runtime", AttributeKind::Numeric, {}},
                                     {"runstatus", AttributeKind::Nominal, {"ok", "timeout"}}}, {}};
  for (std::size_t i = 0; i < s.num_instances(); ++i) {
    for (std::size_t a = 0; a < s.num_algorithms(); ++a) {
      const auto& r = s.run(i, a);
      runs.rows.push_back({s.instances()[i], 1.0, s.algorithms()[a], r.runtime,
                           std::string(r.solved ? "ok" : "timeout")});
    }
  }
  arff::write_file(runs, (root / "algorithm_runs.arff").string());

  arff::Table fv{"feature_values", {inst_attr, rep_attr}, {}};
  for (const auto& f : s.feature_names()) fv.attributes.push_back({f, AttributeKind::Numeric, {}});
  for (std::size_t i = 0; i < s.num_instances(); ++i) {
    std::vector<arff::Value> row{s.instances()[i], 1.0};
    for (double v : s.features(i)) {
      if (std::isnan(v)) row.emplace_back(std::monostate{});
      else row.emplace_back(v);
    }
    fv.rows.push_back(std::move(row));
  }
  arff::write_file(fv, (root / "feature_values.arff").string());

  bool any_cost = false;
  for (std::size_t i = 0; i < s.num_instances(); ++i) any_cost = any_cost || s.feature_cost(i) > 0.0;
  if (any_cost) {
    arff::Table fc{"feature_costs", {inst_attr, rep_attr, {"all_features", AttributeKind::Numeric, {}}}, {}};
    for (std::size_t i = 0; i < s.num_instances(); ++i) {
      fc.rows.push_back({s.instances()[i], 1.0, s.feature_cost(i)});
    }
    arff::write_file(fc, (root / "feature_costs.arff").string());
  }

  arff::Table cv{"cv", {inst_attr, rep_attr, {"fold", AttributeKind::Numeric, {}}}, {}};
  for (std::size_t i = 0; i < s.num_instances(); ++i) {
    cv.rows.push_back({s.instances()[i], 1.0, static_cast<double>(s.fold(i))});
  }
  arff::write_file(cv, (root / "cv.arff").string());
}

}  // namespace asmeta
