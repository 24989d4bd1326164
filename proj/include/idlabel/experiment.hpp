#pragma once

// Runs the four labeling models over the survey vignettes and scores them
// against observed responses.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idlabel/estimation.hpp"
#include "idlabel/lcss.hpp"
#include "idlabel/pcs.hpp"
#include "idlabel/stats.hpp"
#include "idlabel/vignette.hpp"

namespace idlabel {

enum class Model { act, pcs_hand, pcs_est, lcss };
inline constexpr std::array<Model, 4> kAllModels = {Model::act, Model::pcs_hand, Model::pcs_est, Model::lcss};

std::string column_name(Model m);   // act, pcs_hand, pcs_est, lcss
std::string display_name(Model m);  // ACT, Hand-coded PCS-FA, ...

enum class ModelStatus { available, unavailable, input_error, fit_error };

struct ModelPredictions {
  Model model = Model::act;
  ModelStatus status = ModelStatus::unavailable;
  std::string message;
  std::map<std::string, double> prob_first;  // question id -> p(answers[0])
};

struct ComparisonInputs {
  std::vector<VignetteQuestion> questions;
  std::optional<ActContext> act;
  std::optional<ScoreTable> scores;
  std::optional<ResponseDataset> responses;
  std::optional<LcssWeights> lcss_weights;  // used instead of fitting when set
  BootstrapOptions bootstrap;
};

struct GroupMae {
  std::string group;
  std::vector<std::string> question_ids;
  std::map<Model, double> mae;
};

struct PredictionReport {
  std::vector<VignetteQuestion> questions;
  std::vector<ModelPredictions> models;  // in kAllModels order

  bool has_responses = false;
  std::map<std::string, ChoiceCount> counts;
  std::map<std::string, Interval> intervals;  // Agresti-Coull, 95%

  std::map<Model, double> overall_mae;
  std::map<Model, Interval> overall_ci;  // bootstrap percentile interval
  std::vector<GroupMae> groups;

  std::vector<PcsScenarioFit> pcs_fits;
  std::optional<PcsPriorFit> pcs_prior_fit;
  std::optional<FitResult> lcss_fit;
  std::optional<LcssWeights> lcss_weights;
  BootstrapOptions bootstrap;

  const ModelPredictions& model(Model m) const;
  bool available(Model m) const { return model(m).status == ModelStatus::available; }
};

// Hand-coded PCS probability: scores from the table, "someone" cues at 0.
double hand_pcs_probability(const VignetteQuestion& q, const ScoreTable& scores);

// Groups used for condition-level error rows: every (task, trait or
// association label, deflection label) cell of the vignette tables, each
// task, all questions, and two summary sets: "cued, low deflection" (named
// cue with a trait, or a role-pair / same-institution association, under low
// deflection) and "uncued" (every "someone" question).
std::vector<std::pair<std::string, std::vector<std::string>>> condition_groups(
    const std::vector<VignetteQuestion>& questions);

PredictionReport run_comparison(const ComparisonInputs& inputs);

// 0 success; 2 a fit failed; 3 some models unavailable or failed on input.
int exit_code(const PredictionReport& report, const std::vector<Model>& required);

// Writes report.txt, predictions.csv, mae.csv, fits.csv, lcss_weights.csv
// (when LCSS weights exist) and plot-data CSVs for the per-question figures
// of each task and the error figure.
void emit_report(const PredictionReport& report, const std::filesystem::path& out_dir);

void write_predictions_csv(std::ostream& out, const PredictionReport& report);
void write_mae_csv(std::ostream& out, const PredictionReport& report);
void write_fits_csv(std::ostream& out, const PredictionReport& report);
void write_text_report(std::ostream& out, const PredictionReport& report);

// LCSS weights file: header `w_f,w_ft,w_fk` and one row.
void write_lcss_weights(std::ostream& out, const LcssWeights& w);
LcssWeights load_lcss_weights(const std::filesystem::path& path);

}  // namespace idlabel
