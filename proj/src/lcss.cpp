#include "idlabel/lcss.hpp"

#include "idlabel/choice.hpp"
#include "idlabel/error.hpp"

namespace idlabel {

std::vector<double> ExtendedFundamental::flatten() const {
  std::vector<double> out(sentiment.values().begin(), sentiment.values().end());
  out.insert(out.end(), traits.begin(), traits.end());
  out.insert(out.end(), associations.begin(), associations.end());
  return out;
}

namespace {

void require_square(const CovariateModel& block, const char* name) {
  if (block.output_count() != block.input_slots()) {
    throw ModelError(std::string(name) + " block maps " + std::to_string(block.input_slots()) + " slots to " +
                     std::to_string(block.output_count()) + " outputs");
  }
}

// Unit-weight squared distance between a block's inputs and its transients.
double block_deflection(const CovariateModel& block, std::span<const double> in) {
  if (in.empty()) return 0.0;
  const Eigen::VectorXd tau = block.apply(in);
  double total = 0.0;
  for (std::size_t j = 0; j < in.size(); ++j) {
    const double diff = in[j] - tau[static_cast<Eigen::Index>(j)];
    total += diff * diff;
  }
  return total;
}

}  // namespace

BlockCoefficientModel::BlockCoefficientModel(CoefficientModel sentiment, CovariateModel trait,
                                             CovariateModel association)
    : sentiment_(std::move(sentiment)), trait_(std::move(trait)), association_(std::move(association)) {
  require_square(trait_, "trait");
  require_square(association_, "association");
}

Eigen::MatrixXd BlockCoefficientModel::assembled_matrix() const {
  const auto& zs = sentiment_.coefficients();
  const auto& zt = trait_.coefficients();
  const auto& zk = association_.coefficients();
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(zs.rows() + zt.rows() + zk.rows(), zs.cols() + zt.cols() + zk.cols());
  z.block(0, 0, zs.rows(), zs.cols()) = zs;
  z.block(zs.rows(), zs.cols(), zt.rows(), zt.cols()) = zt;
  z.block(zs.rows() + zt.rows(), zs.cols() + zt.cols(), zk.rows(), zk.cols()) = zk;
  return z;
}

Eigen::VectorXd BlockCoefficientModel::assembled_covariates(const ExtendedFundamental& f) const {
  if (f.traits.size() != trait_.input_slots() || f.associations.size() != association_.input_slots()) {
    throw ModelError("extended fundamental does not match the block model's trait/association sizes");
  }
  const Eigen::VectorXd gs = sentiment_.expand(f.sentiment.values());
  const Eigen::VectorXd gt = trait_.expand(f.traits);
  const Eigen::VectorXd gk = association_.expand(f.associations);
  Eigen::VectorXd g(gs.size() + gt.size() + gk.size());
  g << gs, gt, gk;
  return g;
}

double lcss_deflection_full(const ExtendedFundamental& f, const BlockCoefficientModel& model,
                            const std::vector<double>& slot_weights) {
  const std::vector<double> flat = f.flatten();
  if (slot_weights.size() != flat.size()) {
    throw ModelError("expected " + std::to_string(flat.size()) + " slot weights, got " +
                     std::to_string(slot_weights.size()));
  }
  const Eigen::VectorXd tau = model.assembled_matrix() * model.assembled_covariates(f);
  double total = 0.0;
  for (std::size_t j = 0; j < flat.size(); ++j) {
    const double diff = flat[j] - tau[static_cast<Eigen::Index>(j)];
    total += slot_weights[j] * diff * diff;
  }
  return total;
}

double combine_deflections(const ComponentDeflections& d, const LcssWeights& w) {
  auto term = [](double weight, double value, std::size_t length) {
    return length == 0 ? 0.0 : weight / static_cast<double>(length) * value;
  };
  return term(w.sentiment, d.sentiment, d.sentiment_length) + term(w.trait, d.trait, d.trait_length) +
         term(w.association, d.association, d.association_length);
}

std::pair<double, ComponentDeflections> lcss_deflection_decomposed(const ExtendedFundamental& f,
                                                                  const BlockCoefficientModel& model,
                                                                  const LcssWeights& weights) {
  if (f.traits.size() != model.trait().input_slots() ||
      f.associations.size() != model.association().input_slots()) {
    throw ModelError("extended fundamental does not match the block model's trait/association sizes");
  }
  ComponentDeflections d;
  d.sentiment = deflection(f.sentiment, model.sentiment());
  d.trait = block_deflection(model.trait(), f.traits);
  d.association = block_deflection(model.association(), f.associations);
  d.sentiment_length = kEventSlots;
  d.trait_length = f.traits.size();
  d.association_length = f.associations.size();
  return {combine_deflections(d, weights), d};
}

std::vector<double> decomposed_slot_weights(const ExtendedFundamental& f, const LcssWeights& w) {
  std::vector<double> out;
  out.insert(out.end(), kEventSlots, w.sentiment / static_cast<double>(kEventSlots));
  if (!f.traits.empty()) out.insert(out.end(), f.traits.size(), w.trait / static_cast<double>(f.traits.size()));
  if (!f.associations.empty()) {
    out.insert(out.end(), f.associations.size(), w.association / static_cast<double>(f.associations.size()));
  }
  return out;
}

ComponentDeflections scored_semantic_deflections(const VignetteQuestion& q, const std::string& candidate,
                                                 const ScoreTable& scores) {
  if (candidate != q.answers[0] && candidate != q.answers[1]) {
    throw InputError("'" + candidate + "' is not an answer to question " + q.id);
  }
  ComponentDeflections d;
  if (!q.cue_is_someone()) {
    if (q.task == 1) {
      d.trait = scores.max_score(1) - scores.score_or_baseline(1, q.cue, candidate);
    } else {
      d.association = scores.max_score(2) - scores.score(2, q.cue, candidate);
    }
  }
  return d;
}

ComponentDeflections scored_component_deflections(const VignetteQuestion& q, const std::string& candidate,
                                                  const ActContext& act, const ScoreTable& scores) {
  ComponentDeflections d = scored_semantic_deflections(q, candidate, scores);
  d.sentiment = act_question_deflection(q, candidate, act);
  return d;
}

std::array<double, 3> lcss_features(const VignetteQuestion& q, const ActContext& act, const ScoreTable& scores) {
  const auto a = scored_component_deflections(q, q.answers[0], act, scores);
  const auto b = scored_component_deflections(q, q.answers[1], act, scores);
  return {(b.sentiment - a.sentiment) / static_cast<double>(a.sentiment_length),
          (b.trait - a.trait) / static_cast<double>(a.trait_length),
          (b.association - a.association) / static_cast<double>(a.association_length)};
}

double lcss_probability(const VignetteQuestion& q, const LcssWeights& weights, const ActContext& act,
                        const ScoreTable& scores) {
  const auto a = scored_component_deflections(q, q.answers[0], act, scores);
  const auto b = scored_component_deflections(q, q.answers[1], act, scores);
  return binary_choice_prob(-combine_deflections(a, weights), -combine_deflections(b, weights));
}

}  // namespace idlabel
