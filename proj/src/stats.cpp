#include "idlabel/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "idlabel/error.hpp"

namespace idlabel {

double mean_absolute_error(const std::map<std::string, double>& predicted,
                           const std::map<std::string, double>& empirical) {
  if (predicted.empty()) throw InputError("MAE over an empty question set");
  if (predicted.size() != empirical.size()) throw InputError("predicted and empirical question sets differ");
  double total = 0.0;
  for (const auto& [id, p] : predicted) {
    const auto it = empirical.find(id);
    if (it == empirical.end()) throw InputError("no empirical proportion for question " + id);
    total += std::abs(p - it->second);
  }
  return total / static_cast<double>(predicted.size());
}

double normal_critical_value(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw InputError("confidence must lie in (0, 1)");
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 0.5 + confidence / 2.0);
}

Interval agresti_coull_interval(int k, int n, double confidence) {
  if (n < 1 || k < 0 || k > n) {
    throw InputError("invalid binomial counts k=" + std::to_string(k) + ", n=" + std::to_string(n));
  }
  const double z = normal_critical_value(confidence);
  const double z2 = z * z;
  const double n_adj = n + z2;
  const double p_adj = (k + z2 / 2.0) / n_adj;
  const double half = z * std::sqrt(p_adj * (1.0 - p_adj) / n_adj);
  return {std::max(0.0, p_adj - half), std::min(1.0, p_adj + half)};
}

namespace {

// Linear interpolation between order statistics (type 7).
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(pos));
  const std::size_t above = std::min(below + 1, sorted.size() - 1);
  return sorted[below] + (pos - static_cast<double>(below)) * (sorted[above] - sorted[below]);
}

}  // namespace

Interval bootstrap_mae_ci(const ResponseDataset& data, const std::map<std::string, double>& predicted,
                          const BootstrapOptions& options) {
  if (options.replicates < 1) throw InputError("bootstrap needs at least one replicate");
  const auto respondents = data.respondents();
  if (respondents.empty()) throw InputError("bootstrap over an empty response set");

  std::vector<std::string> questions;
  std::vector<double> prediction;
  for (const auto& [id, p] : predicted) {
    questions.push_back(id);
    prediction.push_back(p);
  }
  const std::size_t nq = questions.size();

  // Per-respondent counts: [respondent][question] -> (chose first, answered).
  std::vector<std::vector<std::pair<int, int>>> counts(respondents.size(), std::vector<std::pair<int, int>>(nq));
  for (const auto& r : data.records) {
    if (!r.choice) continue;
    const auto qi = std::lower_bound(questions.begin(), questions.end(), r.question_id);
    if (qi == questions.end() || *qi != r.question_id) continue;
    const auto ri = std::lower_bound(respondents.begin(), respondents.end(), r.respondent);
    auto& cell = counts[static_cast<std::size_t>(ri - respondents.begin())][static_cast<std::size_t>(qi - questions.begin())];
    cell.second += 1;
    if (*r.choice == 0) cell.first += 1;
  }

  std::vector<double> maes;
  maes.reserve(static_cast<std::size_t>(options.replicates));
  std::vector<int> first(nq), answered(nq);
  for (int rep = 0; rep < options.replicates; ++rep) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(rep)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<std::size_t> pick(0, respondents.size() - 1);
    std::fill(first.begin(), first.end(), 0);
    std::fill(answered.begin(), answered.end(), 0);
    for (std::size_t draw = 0; draw < respondents.size(); ++draw) {
      const auto& row = counts[pick(rng)];
      for (std::size_t q = 0; q < nq; ++q) {
        first[q] += row[q].first;
        answered[q] += row[q].second;
      }
    }
    double total = 0.0;
    int used = 0;
    for (std::size_t q = 0; q < nq; ++q) {
      if (answered[q] == 0) continue;
      total += std::abs(prediction[q] - static_cast<double>(first[q]) / answered[q]);
      ++used;
    }
    if (used > 0) maes.push_back(total / used);
  }
  if (maes.empty()) throw InputError("no bootstrap replicate had any answered question");
  std::sort(maes.begin(), maes.end());
  const double tail = (1.0 - options.confidence) / 2.0;
  return {quantile_sorted(maes, tail), quantile_sorted(maes, 1.0 - tail)};
}

}  // namespace idlabel
