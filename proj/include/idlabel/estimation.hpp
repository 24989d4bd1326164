#pragma once

// Maximum-likelihood fitting of the binary logistic models behind the
// Estimated PCS and LCSS labelers: p(answer_a) = 1 / (1 + exp(-theta . x)).

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "idlabel/lcss.hpp"
#include "idlabel/pcs.hpp"
#include "idlabel/responses.hpp"

namespace idlabel {

struct DesignRow {
  std::vector<double> features;
  int outcome = 0;  // 1 when the respondent chose answers[0]
};

struct FitOptions {
  double ridge = 0.0;
  std::vector<std::size_t> pinned;  // coordinates held at 0
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;
  double step_tolerance = 1e-6;
  double divergence_norm = 50.0;
  double separation_ridge = 1e-4;
  double singular_ratio = 1e-10;
};

struct FitResult {
  Eigen::VectorXd estimates;
  Eigen::VectorXd std_errors;  // from the observed information; 0 for pinned, NaN when singular
  std::vector<bool> pinned;
  double log_likelihood = 0.0;  // unpenalized
  bool converged = false;
  int iterations = 0;
  bool separation_flag = false;
  bool singular_flag = false;
  double ridge = 0.0;  // penalty actually used
};

// Unpenalized log-likelihood and its gradient at theta.
double logistic_log_likelihood(const std::vector<DesignRow>& rows, const Eigen::VectorXd& theta);
Eigen::VectorXd logistic_gradient(const std::vector<DesignRow>& rows, const Eigen::VectorXd& theta);

// Newton-Raphson with step halving. Converges when the gradient max-norm is
// below `gradient_tolerance` and the Newton step below `step_tolerance`.
// If the estimates run past `divergence_norm` first, the data are treated
// as separated and refit with `separation_ridge`; separation_flag is set.
FitResult fit_logistic(const std::vector<DesignRow>& rows, const FitOptions& options = {});

double logistic(double x);
double predict_probability(const FitResult& fit, const std::vector<double>& features);

// Identities appearing as answers to questions of `task` cued by `cue`, in
// order of first appearance.
std::vector<std::string> pcs_identity_index(const ResponseDataset& data, int task, const std::string& cue);

// One row per answered response to a question of the given cue in Task 2:
// features are the indicator difference b - a over `identity_index`.
std::vector<DesignRow> build_pcs_design(const ResponseDataset& data, const std::string& cue,
                                        const std::vector<std::string>& identity_index);

// Task 1 variant: one feature, prior(b) - prior(a), where prior is the
// hand-coded score of each answer under the question's name cue. Only
// named-cue questions contribute.
std::vector<DesignRow> build_pcs_prior_design(const ResponseDataset& data, int task, const ScoreTable& prior);

// Estimated activation scores for one cue. The difference design fixes
// beta only up to a constant, so the last identity of the index is pinned
// to 0. beta = -theta.
struct PcsScenarioFit {
  std::string cue;
  std::vector<std::string> identity_index;
  BetaScores beta;
  FitResult fit;
};

PcsScenarioFit fit_pcs_scenario(const ResponseDataset& data, const std::string& cue);

// Single activation-difference coefficient for prior-score designs.
struct PcsPriorFit {
  int task = 1;
  double beta = 0.0;
  FitResult fit;
};

PcsPriorFit fit_pcs_prior(const ResponseDataset& data, int task, const ScoreTable& prior);

// LCSS weights (w_f, w_ft, w_fk) from per-question component features
// (see lcss_features). No intercept.
using LcssFeatureTable = std::map<std::string, std::array<double, 3>>;
std::vector<DesignRow> build_lcss_design(const ResponseDataset& data, const LcssFeatureTable& features);
FitResult fit_lcss_weights(const ResponseDataset& data, const LcssFeatureTable& features);
LcssWeights weights_from_fit(const FitResult& fit);

// Synthetic data: draws each row's outcome from the logistic model at theta.
std::vector<DesignRow> simulate_design(const std::vector<std::vector<double>>& features,
                                       const Eigen::VectorXd& theta, std::uint64_t seed);

// Synthetic survey: every respondent answers every question, choosing
// answers[0] with the given probability.
ResponseDataset simulate_responses(const std::vector<VignetteQuestion>& questions,
                                   const std::map<std::string, double>& prob_first, int respondents,
                                   std::uint64_t seed);

}  // namespace idlabel
