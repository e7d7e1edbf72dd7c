#include "asmeta/training_data.hpp"

#include <algorithm>

#include "asmeta/error.hpp"
#include "asmeta/metrics.hpp"

namespace asmeta {

double TrainingData::charged_cost(std::size_t row, std::size_t algorithm, bool charge_features) const {
  const double c = costs(row, algorithm);
  if (!charge_features || feature_cost.empty() || c >= timeout_cost) return c;
  return c + feature_cost[row];
}

double TrainingData::par10(std::span<const std::size_t> selections, bool charge_features) const {
  if (selections.empty()) throw Error(Errc::EmptyInstanceSet, "PAR10 over empty training data");
  double sum = 0.0;
  for (std::size_t r = 0; r < selections.size(); ++r) sum += charged_cost(r, selections[r], charge_features);
  return sum / static_cast<double>(selections.size());
}

double TrainingData::oracle_par10() const {
  if (size() == 0) throw Error(Errc::EmptyInstanceSet, "oracle over empty training data");
  double sum = 0.0;
  for (std::size_t r = 0; r < size(); ++r) sum += *std::min_element(costs.row(r).begin(), costs.row(r).end());
  return sum / static_cast<double>(size());
}

std::size_t TrainingData::sbs() const {
  if (size() == 0) throw Error(Errc::EmptyInstanceSet, "SBS over empty training data");
  std::vector<double> sum(num_algorithms(), 0.0);
  for (std::size_t r = 0; r < size(); ++r)
    for (std::size_t a = 0; a < num_algorithms(); ++a) sum[a] += costs(r, a);
  return argmin(sum);
}

double TrainingData::npar10(std::span<const std::size_t> selections, bool charge_features) const {
  const std::vector<std::size_t> sbs_sel(size(), sbs());
  return asmeta::npar10(par10(selections, charge_features), oracle_par10(), par10(sbs_sel, false));
}

bool TrainingData::has_gap() const {
  const std::vector<std::size_t> sbs_sel(size(), sbs());
  return par10(sbs_sel, false) > oracle_par10();
}

TrainingData make_training_data(const Scenario& scenario, std::span<const std::size_t> rows) {
  TrainingData data;
  data.features = Matrix(rows.size(), scenario.num_features());
  data.costs = Matrix(rows.size(), scenario.num_algorithms());
  data.feature_cost.resize(rows.size());
  data.timeout_cost = 10.0 * scenario.cutoff();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto f = scenario.features(rows[r]);
    std::copy(f.begin(), f.end(), data.features.row(r).begin());
    for (std::size_t a = 0; a < scenario.num_algorithms(); ++a) data.costs(r, a) = scenario.pr10(rows[r], a);
    data.feature_cost[r] = scenario.feature_cost(rows[r]);
  }
  return data;
}

TrainingData subset(const TrainingData& data, std::span<const std::size_t> rows) {
  TrainingData out;
  out.features = Matrix(rows.size(), data.features.cols());
  out.costs = Matrix(rows.size(), data.costs.cols());
  out.timeout_cost = data.timeout_cost;
  if (!data.feature_cost.empty()) out.feature_cost.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(data.features.row(rows[r]).begin(), data.features.row(rows[r]).end(), out.features.row(r).begin());
    std::copy(data.costs.row(rows[r]).begin(), data.costs.row(rows[r]).end(), out.costs.row(r).begin());
    if (!data.feature_cost.empty()) out.feature_cost[r] = data.feature_cost[rows[r]];
  }
  return out;
}

std::size_t argmin(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < values.size(); ++a) {
    if (values[a] < values[best]) best = a;
  }
  return best;
}

std::vector<std::size_t> best_labels(const Matrix& costs) {
  std::vector<std::size_t> labels(costs.rows());
  for (std::size_t r = 0; r < costs.rows(); ++r) labels[r] = argmin(costs.row(r));
  return labels;
}

}  // namespace asmeta
