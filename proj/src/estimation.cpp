#include "idlabel/estimation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "idlabel/error.hpp"

namespace idlabel {

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double ex = std::exp(x);
  return ex / (1.0 + ex);
}

namespace {

// log(logistic(x)) without cancellation.
double log_logistic(double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

// outcome - logistic(eta), evaluated on the side that avoids cancellation.
double residual(int outcome, double eta) { return outcome == 1 ? logistic(-eta) : -logistic(eta); }

Eigen::Index dimension_of(const std::vector<DesignRow>& rows) {
  if (rows.empty()) throw FitError("no design rows to fit");
  const std::size_t dim = rows.front().features.size();
  if (dim == 0) throw FitError("design rows have no features");
  for (const auto& r : rows) {
    if (r.features.size() != dim) throw FitError("design rows differ in feature length");
    if (r.outcome != 0 && r.outcome != 1) throw FitError("design outcome must be 0 or 1");
  }
  return static_cast<Eigen::Index>(dim);
}

double linear_predictor(const DesignRow& row, const Eigen::VectorXd& theta) {
  double eta = 0.0;
  for (std::size_t j = 0; j < row.features.size(); ++j) eta += row.features[j] * theta[static_cast<Eigen::Index>(j)];
  return eta;
}

struct Problem {
  const std::vector<DesignRow>& rows;
  Eigen::Index dim;
  double ridge;
  std::vector<Eigen::Index> free;  // coordinates being estimated

  double objective(const Eigen::VectorXd& theta) const {
    return logistic_log_likelihood(rows, theta) - 0.5 * ridge * theta.squaredNorm();
  }

  // Gradient and observed information restricted to free coordinates.
  void derivatives(const Eigen::VectorXd& theta, Eigen::VectorXd& grad, Eigen::MatrixXd& info) const {
    const auto m = static_cast<Eigen::Index>(free.size());
    grad = Eigen::VectorXd::Zero(m);
    info = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd x(m);
    for (const auto& row : rows) {
      const double eta = linear_predictor(row, theta);
      const double weight = logistic(eta) * logistic(-eta);
      for (Eigen::Index i = 0; i < m; ++i) x[i] = row.features[static_cast<std::size_t>(free[i])];
      grad += residual(row.outcome, eta) * x;
      info.noalias() += weight * x * x.transpose();
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      grad[i] -= ridge * theta[free[i]];
      info(i, i) += ridge;
    }
  }
};

struct Spectral {
  Eigen::MatrixXd pseudo_inverse;
  bool singular = false;
};

Spectral analyse(const Eigen::MatrixXd& info, double ratio) {
  Spectral s;
  const auto m = info.rows();
  if (m == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double largest = std::max(values.maxCoeff(), 0.0);
  const double cutoff = ratio * largest;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (largest > 0.0 && values[i] > cutoff) inv[i] = 1.0 / values[i];
    else s.singular = true;
  }
  s.pseudo_inverse = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  return s;
}

FitResult newton(const std::vector<DesignRow>& rows, Eigen::Index dim, const FitOptions& options, double ridge) {
  Problem problem{rows, dim, ridge, {}};
  std::vector<bool> pinned(static_cast<std::size_t>(dim), false);
  for (std::size_t p : options.pinned) {
    if (p >= static_cast<std::size_t>(dim)) throw FitError("pinned coordinate out of range");
    pinned[p] = true;
  }
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (!pinned[static_cast<std::size_t>(j)]) problem.free.push_back(j);
  }
  if (problem.free.empty()) throw FitError("every coordinate is pinned");

  FitResult result;
  result.pinned = pinned;
  result.ridge = ridge;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd grad;
  Eigen::MatrixXd info;
  double current = problem.objective(theta);
  bool diverged = false;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    result.iterations = iter;
    problem.derivatives(theta, grad, info);
    const Spectral spectral = analyse(info, options.singular_ratio);
    const Eigen::VectorXd step = spectral.pseudo_inverse * grad;
    if (grad.lpNorm<Eigen::Infinity>() < options.gradient_tolerance &&
        step.lpNorm<Eigen::Infinity>() < options.step_tolerance) {
      result.converged = true;
      break;
    }
    double scale = 1.0;
    Eigen::VectorXd candidate = theta;
    double value = current;
    // Near the optimum the change in the objective is below summation
    // rounding; a step that loses no more than that still counts as ascent.
    const double acceptable = current - 1e-12 * (1.0 + std::abs(current));
    for (int halving = 0; halving < 40; ++halving) {
      candidate = theta;
      for (std::size_t i = 0; i < problem.free.size(); ++i) {
        candidate[problem.free[i]] += scale * step[static_cast<Eigen::Index>(i)];
      }
      value = problem.objective(candidate);
      if (value >= acceptable) break;
      scale *= 0.5;
    }
    if (value < acceptable) {
      // No ascent along the Newton direction. A small step means the optimum
      // is reached to working precision; a large one means the likelihood is
      // flat toward infinity.
      if (step.lpNorm<Eigen::Infinity>() > options.step_tolerance * 1e3) {
        diverged = true;
      } else {
        result.converged = grad.lpNorm<Eigen::Infinity>() < std::sqrt(options.gradient_tolerance);
      }
      break;
    }
    theta = candidate;
    current = value;
    if (theta.norm() > options.divergence_norm) {
      diverged = true;
      break;
    }
  }

  problem.derivatives(theta, grad, info);
  const Spectral spectral = analyse(info, options.singular_ratio);
  result.estimates = theta;
  result.log_likelihood = logistic_log_likelihood(rows, theta);
  result.singular_flag = spectral.singular;
  result.std_errors = Eigen::VectorXd::Zero(dim);
  for (std::size_t i = 0; i < problem.free.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    result.std_errors[problem.free[i]] = spectral.singular ? std::numeric_limits<double>::quiet_NaN()
                                                           : std::sqrt(spectral.pseudo_inverse(k, k));
  }
  if (diverged) result.converged = false;
  result.separation_flag = diverged;
  return result;
}

}  // namespace

double logistic_log_likelihood(const std::vector<DesignRow>& rows, const Eigen::VectorXd& theta) {
  double total = 0.0;
  for (const auto& row : rows) {
    const double eta = linear_predictor(row, theta);
    total += row.outcome == 1 ? log_logistic(eta) : log_logistic(-eta);
  }
  return total;
}

Eigen::VectorXd logistic_gradient(const std::vector<DesignRow>& rows, const Eigen::VectorXd& theta) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());
  for (const auto& row : rows) {
    const double r = residual(row.outcome, linear_predictor(row, theta));
    for (std::size_t j = 0; j < row.features.size(); ++j) grad[static_cast<Eigen::Index>(j)] += r * row.features[j];
  }
  return grad;
}

FitResult fit_logistic(const std::vector<DesignRow>& rows, const FitOptions& options) {
  if (options.ridge < 0.0) throw FitError("ridge penalty must be nonnegative");
  const Eigen::Index dim = dimension_of(rows);
  FitResult result = newton(rows, dim, options, options.ridge);
  if (result.separation_flag && options.ridge < options.separation_ridge) {
    result = newton(rows, dim, options, options.separation_ridge);
    result.separation_flag = true;
  }
  return result;
}

double predict_probability(const FitResult& fit, const std::vector<double>& features) {
  if (static_cast<Eigen::Index>(features.size()) != fit.estimates.size()) {
    throw FitError("feature length does not match the fitted model");
  }
  return logistic(linear_predictor(DesignRow{features, 0}, fit.estimates));
}

std::vector<std::string> pcs_identity_index(const ResponseDataset& data, int task, const std::string& cue) {
  std::vector<std::string> index;
  for (const auto& [id, q] : data.registry) {
    (void)id;
    if (q.task != task || q.cue != cue) continue;
    for (const auto& answer : q.answers) {
      if (std::find(index.begin(), index.end(), answer) == index.end()) index.push_back(answer);
    }
  }
  return index;
}

std::vector<DesignRow> build_pcs_design(const ResponseDataset& data, const std::string& cue,
                                        const std::vector<std::string>& identity_index) {
  std::vector<DesignRow> rows;
  for (const auto& r : data.records) {
    const auto& q = data.question(r.question_id);
    if (q.task != 2 || q.cue != cue || !r.choice) continue;
    DesignRow row{std::vector<double>(identity_index.size(), 0.0), *r.choice == 0 ? 1 : 0};
    for (std::size_t side = 0; side < 2; ++side) {
      const auto it = std::find(identity_index.begin(), identity_index.end(), q.answers[side]);
      if (it == identity_index.end()) {
        throw InputError("identity '" + q.answers[side] + "' of " + q.id + " is not in the scenario index");
      }
      row.features[static_cast<std::size_t>(it - identity_index.begin())] += side == 0 ? -1.0 : 1.0;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DesignRow> build_pcs_prior_design(const ResponseDataset& data, int task, const ScoreTable& prior) {
  std::vector<DesignRow> rows;
  for (const auto& r : data.records) {
    const auto& q = data.question(r.question_id);
    if (q.task != task || q.cue_is_someone() || !r.choice) continue;
    const double a = prior.score_or_baseline(task, q.cue, q.answers[0]);
    const double b = prior.score_or_baseline(task, q.cue, q.answers[1]);
    rows.push_back(DesignRow{{b - a}, *r.choice == 0 ? 1 : 0});
  }
  return rows;
}

PcsScenarioFit fit_pcs_scenario(const ResponseDataset& data, const std::string& cue) {
  PcsScenarioFit out;
  out.cue = cue;
  out.identity_index = pcs_identity_index(data, 2, cue);
  if (out.identity_index.empty()) throw FitError("no Task 2 questions cued by '" + cue + "'");
  const auto rows = build_pcs_design(data, cue, out.identity_index);
  if (rows.empty()) throw FitError("no responses for Task 2 cue '" + cue + "'");
  FitOptions options;
  options.pinned = {out.identity_index.size() - 1};
  out.fit = fit_logistic(rows, options);
  out.beta = BetaScores{2, cue, {}};
  for (std::size_t i = 0; i < out.identity_index.size(); ++i) {
    out.beta.scores[out.identity_index[i]] = -out.fit.estimates[static_cast<Eigen::Index>(i)] + 0.0;
  }
  return out;
}

PcsPriorFit fit_pcs_prior(const ResponseDataset& data, int task, const ScoreTable& prior) {
  const auto rows = build_pcs_prior_design(data, task, prior);
  if (rows.empty()) throw FitError("no named-cue responses for task " + std::to_string(task));
  PcsPriorFit out;
  out.task = task;
  out.fit = fit_logistic(rows);
  out.beta = -out.fit.estimates[0];
  return out;
}

std::vector<DesignRow> build_lcss_design(const ResponseDataset& data, const LcssFeatureTable& features) {
  std::vector<DesignRow> rows;
  for (const auto& r : data.records) {
    if (!r.choice) continue;
    const auto it = features.find(r.question_id);
    if (it == features.end()) throw InputError("no LCSS features for question " + r.question_id);
    rows.push_back(DesignRow{{it->second.begin(), it->second.end()}, *r.choice == 0 ? 1 : 0});
  }
  return rows;
}

FitResult fit_lcss_weights(const ResponseDataset& data, const LcssFeatureTable& features) {
  return fit_logistic(build_lcss_design(data, features));
}

LcssWeights weights_from_fit(const FitResult& fit) {
  if (fit.estimates.size() != 3) throw FitError("LCSS fit must have three weights");
  return LcssWeights{fit.estimates[0], fit.estimates[1], fit.estimates[2]};
}

std::vector<DesignRow> simulate_design(const std::vector<std::vector<double>>& features,
                                       const Eigen::VectorXd& theta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DesignRow> rows;
  rows.reserve(features.size());
  for (const auto& x : features) {
    DesignRow row{x, 0};
    row.outcome = unit(rng) < logistic(linear_predictor(row, theta)) ? 1 : 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

ResponseDataset simulate_responses(const std::vector<VignetteQuestion>& questions,
                                   const std::map<std::string, double>& prob_first, int respondents,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ResponseRecord> records;
  for (int r = 0; r < respondents; ++r) {
    char id[16];
    std::snprintf(id, sizeof id, "R%03d", r + 1);
    for (const auto& q : questions) {
      const auto it = prob_first.find(q.id);
      if (it == prob_first.end()) throw InputError("no choice probability for question " + q.id);
      records.push_back(ResponseRecord{id, q.task, q.id, unit(rng) < it->second ? 0 : 1});
    }
  }
  return make_dataset(std::move(records), questions);
}

}  // namespace idlabel
