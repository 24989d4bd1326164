#include "idlabel/experiment.hpp"

#include <algorithm>
#include <set>

#include "idlabel/choice.hpp"
#include "idlabel/error.hpp"

namespace idlabel {

std::string column_name(Model m) {
  switch (m) {
    case Model::act: return "act";
    case Model::pcs_hand: return "pcs_hand";
    case Model::pcs_est: return "pcs_est";
    case Model::lcss: return "lcss";
  }
  return "?";
}

std::string display_name(Model m) {
  switch (m) {
    case Model::act: return "ACT";
    case Model::pcs_hand: return "Hand-coded PCS-FA";
    case Model::pcs_est: return "Estimated PCS-FA";
    case Model::lcss: return "LCSS";
  }
  return "?";
}

const ModelPredictions& PredictionReport::model(Model m) const {
  for (const auto& p : models) {
    if (p.model == m) return p;
  }
  throw std::logic_error("report has no entry for model " + column_name(m));
}

double hand_pcs_probability(const VignetteQuestion& q, const ScoreTable& scores) {
  if (q.cue_is_someone()) return binary_choice_prob(0.0, 0.0);
  if (q.task == 1) {
    return binary_choice_prob(scores.score_or_baseline(1, q.cue, q.answers[0]),
                              scores.score_or_baseline(1, q.cue, q.answers[1]));
  }
  return pcs_probability(scores.group(q.task, q.cue), q.answers[0], q.answers[1]);
}

std::vector<std::pair<std::string, std::vector<std::string>>> condition_groups(
    const std::vector<VignetteQuestion>& questions) {
  std::vector<std::pair<std::string, std::vector<std::string>>> groups;
  auto add = [&](const std::string& name, const std::string& id) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == name; });
    if (it == groups.end()) {
      groups.emplace_back(name, std::vector<std::string>{});
      it = std::prev(groups.end());
    }
    it->second.push_back(id);
  };
  for (const auto& q : questions) add("all", q.id);
  for (const auto& q : questions) add("task " + std::to_string(q.task), q.id);
  for (const auto& q : questions) {
    const bool low = q.deflection == DeflectionCondition::low;
    const bool cued = q.task == 1 ? !q.cue_is_someone()
                                  : q.association == AssociationCondition::role_pair ||
                                        q.association == AssociationCondition::same_institution;
    if (low && cued) add("cued, low deflection", q.id);
  }
  for (const auto& q : questions) {
    if (q.cue_is_someone()) add("uncued", q.id);
  }
  for (const auto& q : questions) {
    const std::string signal = q.task == 1 ? "trait=" + label(q.trait) : "association=" + label(q.association);
    add("task " + std::to_string(q.task) + " | " + signal + " | deflection=" + label(q.deflection), q.id);
  }
  return groups;
}

namespace {

template <typename Fn>
void fill_predictions(ModelPredictions& out, const std::vector<VignetteQuestion>& questions, Fn&& predict) {
  try {
    std::map<std::string, double> prob;
    for (const auto& q : questions) prob[q.id] = predict(q);
    out.prob_first = std::move(prob);
    out.status = ModelStatus::available;
  } catch (const FitError& e) {
    out.status = ModelStatus::fit_error;
    out.message = e.what();
  } catch (const std::runtime_error& e) {
    out.status = ModelStatus::input_error;
    out.message = e.what();
  }
}

void mark_unavailable(ModelPredictions& out, std::string reason) {
  out.status = ModelStatus::unavailable;
  out.message = std::move(reason);
}

}  // namespace

PredictionReport run_comparison(const ComparisonInputs& in) {
  PredictionReport report;
  report.questions = in.questions;
  report.bootstrap = in.bootstrap;
  report.has_responses = in.responses.has_value();
  for (Model m : kAllModels) report.models.push_back(ModelPredictions{m, ModelStatus::unavailable, {}, {}});
  auto slot = [&](Model m) -> ModelPredictions& {
    return report.models[static_cast<std::size_t>(std::find(kAllModels.begin(), kAllModels.end(), m) - kAllModels.begin())];
  };

  // ACT
  if (in.act) {
    fill_predictions(slot(Model::act), in.questions, [&](const VignetteQuestion& q) { return act_probability(q, *in.act); });
  } else {
    mark_unavailable(slot(Model::act), "no EPA dictionary / impression-change equations supplied");
  }

  // Hand-coded PCS
  if (in.scores) {
    fill_predictions(slot(Model::pcs_hand), in.questions,
                     [&](const VignetteQuestion& q) { return hand_pcs_probability(q, *in.scores); });
  } else {
    mark_unavailable(slot(Model::pcs_hand), "no score table supplied");
  }

  // Estimated PCS
  if (!in.responses) {
    mark_unavailable(slot(Model::pcs_est), "no response data supplied");
  } else if (!in.scores) {
    mark_unavailable(slot(Model::pcs_est), "no score table supplied (needed for the Task 1 priors)");
  } else {
    const ResponseDataset& data = *in.responses;
    std::map<std::string, PcsScenarioFit> scenario_fits;
    std::optional<PcsPriorFit> prior_fit;
    fill_predictions(slot(Model::pcs_est), in.questions, [&](const VignetteQuestion& q) -> double {
      if (q.cue_is_someone()) return binary_choice_prob(0.0, 0.0);
      if (q.task == 1) {
        if (!prior_fit) prior_fit = fit_pcs_prior(data, 1, *in.scores);
        const double a = in.scores->score_or_baseline(1, q.cue, q.answers[0]);
        const double b = in.scores->score_or_baseline(1, q.cue, q.answers[1]);
        return binary_choice_prob(prior_fit->beta * a, prior_fit->beta * b);
      }
      auto it = scenario_fits.find(q.cue);
      if (it == scenario_fits.end()) it = scenario_fits.emplace(q.cue, fit_pcs_scenario(data, q.cue)).first;
      return pcs_probability(it->second.beta, q.answers[0], q.answers[1]);
    });
    for (auto& [cue, fit] : scenario_fits) report.pcs_fits.push_back(fit);
    report.pcs_prior_fit = prior_fit;
  }

  // LCSS
  if (!in.act || !in.scores) {
    mark_unavailable(slot(Model::lcss), "needs both the ACT inputs and the score table");
  } else if (!in.responses && !in.lcss_weights) {
    mark_unavailable(slot(Model::lcss), "no response data or fixed LCSS weights supplied");
  } else {
    fill_predictions(slot(Model::lcss), in.questions, [&](const VignetteQuestion& q) -> double {
      if (!report.lcss_weights) {
        if (in.lcss_weights) {
          report.lcss_weights = in.lcss_weights;
        } else {
          LcssFeatureTable features;
          for (const auto& question : in.questions) features[question.id] = lcss_features(question, *in.act, *in.scores);
          report.lcss_fit = fit_lcss_weights(*in.responses, features);
          report.lcss_weights = weights_from_fit(*report.lcss_fit);
        }
      }
      return lcss_probability(q, *report.lcss_weights, *in.act, *in.scores);
    });
  }

  if (!in.responses) return report;

  const ResponseDataset& data = *in.responses;
  report.counts = choice_counts(data);
  for (const auto& [id, c] : report.counts) report.intervals[id] = agresti_coull_interval(c.chose_first, c.answered);

  std::map<std::string, double> empirical;
  for (const auto& [id, c] : report.counts) empirical[id] = c.proportion();

  auto restrict = [&](const std::map<std::string, double>& prob, const std::vector<std::string>& ids) {
    std::map<std::string, double> p, e;
    for (const auto& id : ids) {
      if (!empirical.contains(id)) continue;
      p[id] = prob.at(id);
      e[id] = empirical.at(id);
    }
    return std::make_pair(p, e);
  };

  for (const auto& [name, ids] : condition_groups(in.questions)) {
    GroupMae g{name, ids, {}};
    for (const auto& m : report.models) {
      if (m.status != ModelStatus::available) continue;
      const auto [p, e] = restrict(m.prob_first, ids);
      if (!p.empty()) g.mae[m.model] = mean_absolute_error(p, e);
    }
    report.groups.push_back(std::move(g));
  }
  for (const auto& m : report.models) {
    if (m.status != ModelStatus::available) continue;
    std::vector<std::string> all;
    for (const auto& q : in.questions) all.push_back(q.id);
    const auto [p, e] = restrict(m.prob_first, all);
    if (p.empty()) continue;
    report.overall_mae[m.model] = mean_absolute_error(p, e);
    report.overall_ci[m.model] = bootstrap_mae_ci(data, p, in.bootstrap);
  }
  return report;
}

int exit_code(const PredictionReport& report, const std::vector<Model>& required) {
  bool partial = false;
  for (Model m : required) {
    const auto& p = report.model(m);
    if (p.status == ModelStatus::fit_error) return 2;
    if (p.status != ModelStatus::available) partial = true;
  }
  return partial ? 3 : 0;
}

}  // namespace idlabel
