#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "idlabel/error.hpp"
#include "idlabel/estimation.hpp"
#include "idlabel/experiment.hpp"
#include "idlabel/pcs.hpp"

namespace fs = std::filesystem;
using namespace idlabel;

namespace {

constexpr int kInputFailure = 1;

struct Paths {
  std::string dict;
  std::string coeff;
  std::string modifier_coeff;
  std::string names;
  std::string vignettes = (fs::path(IDLABEL_DATA_DIR) / "vignettes.csv").string();
  std::string betas = (fs::path(IDLABEL_DATA_DIR) / "handcoded_scores.csv").string();
  std::string responses;
  std::string lcss_weights;
  std::string out;
  std::uint64_t seed = BootstrapOptions{}.seed;
  int replicates = BootstrapOptions{}.replicates;
};

void add_model_inputs(CLI::App* cmd, Paths& p) {
  cmd->add_option("--dict", p.dict, "EPA dictionary CSV (term,type,E,P,A)")->check(CLI::ExistingFile);
  cmd->add_option("--coeff", p.coeff, "impression-change coefficient file")->check(CLI::ExistingFile);
  cmd->add_option("--modifier-coeff", p.modifier_coeff, "modifier amalgamation coefficient file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--names", p.names, "EPA ratings of the name cues (defaults to modifier rows of --dict)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--vignettes", p.vignettes, "vignette CSV")->check(CLI::ExistingFile)->capture_default_str();
  cmd->add_option("--betas", p.betas, "hand-coded score CSV")->check(CLI::ExistingFile)->capture_default_str();
}

void add_evaluation_inputs(CLI::App* cmd, Paths& p, bool responses_required) {
  auto* opt = cmd->add_option("--responses", p.responses, "survey responses CSV")->check(CLI::ExistingFile);
  if (responses_required) opt->required();
  cmd->add_option("--lcss-weights", p.lcss_weights, "use these LCSS weights instead of fitting")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", p.seed, "bootstrap seed")->capture_default_str();
  cmd->add_option("--replicates", p.replicates, "bootstrap replicates")->check(CLI::PositiveNumber)
      ->capture_default_str();
}

ComparisonInputs load_inputs(const Paths& p, bool with_responses) {
  ComparisonInputs in;
  in.questions = load_vignettes(p.vignettes);
  in.scores = ScoreTable(load_handcoded_betas(p.betas));
  const int given = !p.dict.empty() + !p.coeff.empty() + !p.modifier_coeff.empty();
  if (given != 0 && given != 3) throw InputError("--dict, --coeff and --modifier-coeff must be given together");
  if (given == 3) {
    auto dict = load_dictionary(p.dict);
    auto names = p.names.empty() ? name_epa_from(dict) : load_name_epa(p.names);
    in.act = ActContext{std::move(dict), load_coefficients(p.coeff), load_modifier_coefficients(p.modifier_coeff),
                        std::move(names), DeflectionWeights{}};
  }
  if (with_responses && !p.responses.empty()) in.responses = load_responses(p.responses, in.questions);
  if (!p.lcss_weights.empty()) in.lcss_weights = load_lcss_weights(p.lcss_weights);
  in.bootstrap.seed = p.seed;
  in.bootstrap.replicates = p.replicates;
  return in;
}

void print_model_problems(const PredictionReport& report) {
  for (const auto& m : report.models) {
    if (m.status != ModelStatus::available && !m.message.empty()) {
      std::cerr << display_name(m.model) << ": " << m.message << "\n";
    }
  }
}

int finish(const PredictionReport& report, const std::vector<Model>& required) {
  print_model_problems(report);
  return exit_code(report, required);
}

void write_to(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  writer(out);
  if (!out) throw InputError("failed writing " + path);
}

int run_predict(const Paths& p) {
  const auto report = run_comparison(load_inputs(p, false));
  write_to(p.out, [&](std::ostream& o) { write_predictions_csv(o, report); });
  return finish(report, {Model::act, Model::pcs_hand});
}

int run_fit(const Paths& p) {
  auto in = load_inputs(p, true);
  in.bootstrap.replicates = 1;
  const auto report = run_comparison(in);
  if (!p.out.empty()) {
    fs::create_directories(p.out);
    write_to((fs::path(p.out) / "fits.csv").string(), [&](std::ostream& o) { write_fits_csv(o, report); });
    if (report.lcss_weights) {
      write_to((fs::path(p.out) / "lcss_weights.csv").string(),
               [&](std::ostream& o) { write_lcss_weights(o, *report.lcss_weights); });
    }
  } else {
    write_fits_csv(std::cout, report);
  }
  return finish(report, {Model::pcs_est, Model::lcss});
}

int run_evaluate(const Paths& p) {
  const auto report = run_comparison(load_inputs(p, true));
  write_to(p.out, [&](std::ostream& o) { write_mae_csv(o, report); });
  return finish(report, {kAllModels.begin(), kAllModels.end()});
}

int run_report(const Paths& p) {
  const auto report = run_comparison(load_inputs(p, true));
  emit_report(report, p.out);
  write_text_report(std::cout, report);
  const std::vector<Model> required =
      report.has_responses ? std::vector<Model>(kAllModels.begin(), kAllModels.end())
                           : std::vector<Model>{Model::act, Model::pcs_hand};
  return finish(report, required);
}

struct SimulateArgs {
  std::string model = "pcs_hand";
  int respondents = 78;
};

int run_simulate(const Paths& p, const SimulateArgs& s) {
  const auto in = load_inputs(p, false);
  const auto report = run_comparison(in);
  std::optional<Model> chosen;
  for (Model m : {Model::act, Model::pcs_hand}) {
    if (column_name(m) == s.model) chosen = m;
  }
  if (!chosen) throw InputError("--model must be act or pcs_hand");
  const auto& preds = report.model(*chosen);
  if (preds.status != ModelStatus::available) {
    throw InputError(display_name(*chosen) + " is unavailable: " + preds.message);
  }
  const auto data = simulate_responses(in.questions, preds.prob_first, s.respondents, p.seed);
  write_to(p.out, [&](std::ostream& o) { write_responses(o, data); });
  return 0;
}

struct ActivateArgs {
  std::string network;
  std::vector<std::string> cues;
  ActivationParams params;
};

int run_activate(const ActivateArgs& a, const std::string& out) {
  const auto net = load_network(a.network);
  const auto state = spread_activation(net, a.cues, a.params);
  write_to(out, [&](std::ostream& o) {
    o << "token,role,activation\n";
    for (std::size_t i = 0; i < state.tokens.size(); ++i) {
      std::ostringstream v;
      v.precision(9);
      v << std::fixed << state.activation[i];
      const auto role = net.nodes()[i].role;
      const char* name = role == NodeRole::identity ? "identity"
                         : role == NodeRole::trait  ? "trait"
                         : role == NodeRole::setting ? "setting"
                         : role == NodeRole::cue    ? "cue"
                                                    : "other";
      o << state.tokens[i] << "," << name << "," << v.str() << "\n";
    }
  });
  std::cerr << (state.converged ? "converged" : "did not converge") << " after " << state.iterations
            << " iterations\n";
  return state.converged ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity labeling models: ACT, PCS, LCSS"};
  app.require_subcommand(1);

  Paths paths;
  SimulateArgs sim;
  ActivateArgs act;

  auto* predict = app.add_subcommand("predict", "per-question probabilities from ACT and hand-coded PCS");
  add_model_inputs(predict, paths);
  predict->add_option("--out", paths.out, "output CSV (stdout when omitted)");

  auto* fit = app.add_subcommand("fit", "fit estimated PCS scores and LCSS weights");
  add_model_inputs(fit, paths);
  add_evaluation_inputs(fit, paths, true);
  fit->add_option("--out", paths.out, "output directory for fits.csv and lcss_weights.csv");

  auto* evaluate = app.add_subcommand("evaluate", "error of every model against responses");
  add_model_inputs(evaluate, paths);
  add_evaluation_inputs(evaluate, paths, true);
  evaluate->add_option("--out", paths.out, "output CSV of errors (stdout when omitted)");

  auto* report = app.add_subcommand("report", "write the full report and plot data");
  add_model_inputs(report, paths);
  add_evaluation_inputs(report, paths, false);
  report->add_option("--out", paths.out, "output directory")->required();

  auto* simulate = app.add_subcommand("simulate", "draw synthetic responses from a model's predictions");
  add_model_inputs(simulate, paths);
  simulate->add_option("--model", sim.model, "act or pcs_hand")->capture_default_str();
  simulate->add_option("--respondents", sim.respondents, "number of respondents")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--seed", paths.seed, "random seed")->capture_default_str();
  simulate->add_option("--out", paths.out, "output CSV (stdout when omitted)");

  auto* activate = app.add_subcommand("activate", "settle a spreading-activation network");
  activate->add_option("--network", act.network, "network file")->required()->check(CLI::ExistingFile);
  activate->add_option("--cue", act.cues, "cued node (repeatable)")->required();
  activate->add_option("--floor", act.params.floor)->capture_default_str();
  activate->add_option("--ceiling", act.params.ceiling)->capture_default_str();
  activate->add_option("--decay", act.params.decay)->capture_default_str();
  activate->add_option("--step", act.params.step)->capture_default_str();
  activate->add_option("--cue-level", act.params.cue_level)->capture_default_str();
  activate->add_option("--tolerance", act.params.tolerance)->capture_default_str();
  activate->add_option("--max-iterations", act.params.max_iterations)->capture_default_str();
  activate->add_option("--out", paths.out, "output CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputFailure;
  }

  try {
    if (*predict) return run_predict(paths);
    if (*fit) return run_fit(paths);
    if (*evaluate) return run_evaluate(paths);
    if (*report) return run_report(paths);
    if (*simulate) return run_simulate(paths, sim);
    if (*activate) return run_activate(act, paths.out);
  } catch (const FitError& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputFailure;
  }
  return kInputFailure;
}
