#pragma once

// Latent Cognitive Social Spaces: the ACT event vector extended with trait
// and association dimensions. The impression-change matrix is block
// diagonal over (sentiment, trait, association), so the combined deflection
// splits into three independently weighted parts.

#include <Eigen/Core>
#include <array>
#include <utility>
#include <vector>

#include "idlabel/affect.hpp"
#include "idlabel/pcs.hpp"
#include "idlabel/vignette.hpp"

namespace idlabel {

struct ExtendedFundamental {
  EventFundamental sentiment;
  std::vector<double> traits;        // [a_t0..a_tT, o_t0..o_tT]
  std::vector<double> associations;  // [a_k0..a_kK, o_k0..o_kK]

  std::size_t size() const { return kEventSlots + traits.size() + associations.size(); }
  std::vector<double> flatten() const;
};

// Each block maps its own slots to the same number of transient slots.
class BlockCoefficientModel {
 public:
  BlockCoefficientModel(CoefficientModel sentiment, CovariateModel trait, CovariateModel association);

  const CoefficientModel& sentiment() const { return sentiment_; }
  const CovariateModel& trait() const { return trait_; }
  const CovariateModel& association() const { return association_; }

  // The full Z* with structurally zero off-diagonal blocks, and g*(f*) as
  // the concatenation of the per-block covariates.
  Eigen::MatrixXd assembled_matrix() const;
  Eigen::VectorXd assembled_covariates(const ExtendedFundamental& f) const;

 private:
  CoefficientModel sentiment_;
  CovariateModel trait_;
  CovariateModel association_;
};

struct ComponentDeflections {
  double sentiment = 0.0;
  double trait = 0.0;
  double association = 0.0;
  std::size_t sentiment_length = kEventSlots;
  std::size_t trait_length = 1;
  std::size_t association_length = 1;
};

struct LcssWeights {
  double sentiment = 0.0;
  double trait = 0.0;
  double association = 0.0;
};

// sum_j w*_j (f*_j - tau*_j)^2 computed from the assembled Z* and g*(f*).
double lcss_deflection_full(const ExtendedFundamental& f, const BlockCoefficientModel& model,
                            const std::vector<double>& slot_weights);

// (w_f/|f|) d(f) + (w_ft/|f_t|) d_T(f_t) + (w_fk/|f_k|) d_K(f_k). A block of
// length zero contributes 0.
double combine_deflections(const ComponentDeflections& d, const LcssWeights& w);

std::pair<double, ComponentDeflections> lcss_deflection_decomposed(const ExtendedFundamental& f,
                                                                  const BlockCoefficientModel& model,
                                                                  const LcssWeights& weights);

// Per-slot weights under which the full form equals the decomposed form.
std::vector<double> decomposed_slot_weights(const ExtendedFundamental& f, const LcssWeights& w);

// Scalar deflections for one vignette answer. Sentiment comes from ACT.
// Association deflection (Task 2) is the largest Task 2 score minus the
// score of (cue, candidate); trait deflection (Task 1) is the same with Task
// 1 scores. Both are 0 where the question does not specify them, including
// every "someone" cue. Trait and association lengths are 1.
ComponentDeflections scored_component_deflections(const VignetteQuestion& q, const std::string& candidate,
                                                  const ActContext& act, const ScoreTable& scores);

// The trait and association parts alone; sentiment is left at 0.
ComponentDeflections scored_semantic_deflections(const VignetteQuestion& q, const std::string& candidate,
                                                 const ScoreTable& scores);

// Regression features for answers[0]: (d_c(b) - d_c(a)) / |c| for the
// sentiment, trait and association components. p(a) = logistic(w . x).
std::array<double, 3> lcss_features(const VignetteQuestion& q, const ActContext& act, const ScoreTable& scores);

double lcss_probability(const VignetteQuestion& q, const LcssWeights& weights, const ActContext& act,
                        const ScoreTable& scores);

}  // namespace idlabel
