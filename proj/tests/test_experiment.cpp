#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "idlabel/error.hpp"
#include "idlabel/experiment.hpp"
#include "test_support.hpp"

using namespace idlabel;
using namespace idlabel::testing;

namespace {

ComparisonInputs base_inputs() {
  ComparisonInputs in;
  in.questions = shipped_questions();
  in.act = fixture_context();
  in.scores = ScoreTable(load_handcoded_betas(data_path("handcoded_scores.csv")));
  in.bootstrap.replicates = 200;
  return in;
}

ResponseDataset synthetic_responses(const std::vector<VignetteQuestion>& qs, std::uint64_t seed) {
  std::map<std::string, double> prob;
  int i = 0;
  for (const auto& q : qs) prob[q.id] = 0.15 + 0.7 * ((i++ * 37) % 100) / 100.0;
  return simulate_responses(qs, prob, 78, seed);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_CASE("condition groups") {
  const auto qs = shipped_questions();
  const auto groups = condition_groups(qs);
  std::map<std::string, std::size_t> sizes;
  for (const auto& [name, ids] : groups) sizes[name] = ids.size();
  CHECK(sizes.at("all") == 40);
  CHECK(sizes.at("task 1") == 16);
  CHECK(sizes.at("task 2") == 24);
  CHECK(sizes.at("cued, low deflection") == 8);
  CHECK(sizes.at("uncued") == 20);
  // Every question sits in exactly one table cell.
  std::size_t cells = 0;
  for (const auto& [name, ids] : groups)
    if (name.rfind("task 1 |", 0) == 0 || name.rfind("task 2 |", 0) == 0) cells += ids.size();
  CHECK(cells == 40);
}

TEST_CASE("hand-coded PCS over the vignettes") {
  const auto in = base_inputs();
  for (const auto& q : in.questions) {
    const double p = hand_pcs_probability(q, *in.scores);
    if (q.cue_is_someone()) CHECK(p == 0.5);
    VignetteQuestion swapped = q;
    std::swap(swapped.answers[0], swapped.answers[1]);
    CHECK(p + hand_pcs_probability(swapped, *in.scores) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(hand_pcs_probability(find_question(in.questions, "Q2-01"), *in.scores) ==
        doctest::Approx(0.982014).epsilon(1e-6));
}

TEST_CASE("run without responses") {
  const auto report = run_comparison(base_inputs());
  CHECK(report.available(Model::act));
  CHECK(report.available(Model::pcs_hand));
  CHECK_FALSE(report.available(Model::pcs_est));
  CHECK_FALSE(report.available(Model::lcss));
  CHECK(exit_code(report, {Model::act, Model::pcs_hand}) == 0);
  CHECK(exit_code(report, {kAllModels.begin(), kAllModels.end()}) == 3);
  std::ostringstream csv;
  write_predictions_csv(csv, report);
  CHECK(first_line(csv.str()) == "question_id,act,pcs_hand");
  CHECK(report.model(Model::act).prob_first.size() == 40);
}

TEST_CASE("full run on synthetic responses") {
  auto in = base_inputs();
  in.responses = synthetic_responses(in.questions, 11);
  const auto report = run_comparison(in);
  for (Model m : kAllModels) {
    REQUIRE(report.available(m));
    CHECK(report.model(m).prob_first.size() == 40);
    for (const auto& [id, p] : report.model(m).prob_first) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
    CHECK(report.overall_mae.at(m) >= 0.0);
    CHECK(report.overall_mae.at(m) <= 1.0);
    CHECK(report.overall_ci.at(m).lo <= report.overall_ci.at(m).hi);
  }
  CHECK(exit_code(report, {kAllModels.begin(), kAllModels.end()}) == 0);
  CHECK(report.lcss_weights.has_value());
  CHECK(report.pcs_fits.size() == 2);
  for (const auto& [id, ci] : report.intervals) {
    CHECK(ci.lo <= report.counts.at(id).proportion());
    CHECK(report.counts.at(id).proportion() <= ci.hi);
  }

  std::ostringstream csv;
  write_predictions_csv(csv, report);
  CHECK(first_line(csv.str()) == "question_id,empirical,ci_lo,ci_hi,act,pcs_hand,pcs_est,lcss");

  std::ostringstream mae;
  write_mae_csv(mae, report);
  CHECK(mae.str().find("cued, low deflection") != std::string::npos);
  CHECK(mae.str().find("Low (Different Institution)") != std::string::npos);
}

TEST_CASE("fixed LCSS weights skip the fit") {
  auto in = base_inputs();
  in.responses = synthetic_responses(in.questions, 13);
  in.lcss_weights = LcssWeights{0.0, 0.0, 1.0};
  const auto report = run_comparison(in);
  CHECK_FALSE(report.lcss_fit.has_value());
  CHECK(report.model(Model::lcss).prob_first.at("Q2-01") == doctest::Approx(0.982014).epsilon(1e-6));
}

TEST_CASE("vocabulary gaps disable only the affected model") {
  auto in = base_inputs();
  EpaDictionary sparse;
  sparse.add("grandmother", ConceptType::identity, EpaVector(1, 1, 1));
  in.act->dictionary = sparse;
  const auto report = run_comparison(in);
  CHECK(report.model(Model::act).status == ModelStatus::input_error);
  CHECK(report.model(Model::act).message.find("no EPA entry") != std::string::npos);
  CHECK(report.available(Model::pcs_hand));
  CHECK(exit_code(report, {Model::act, Model::pcs_hand}) == 3);
}

TEST_CASE("report output is byte-identical across runs") {
  const auto tmp = std::filesystem::temp_directory_path() / "idlabel_test_report";
  std::filesystem::remove_all(tmp);
  auto in = base_inputs();
  in.responses = synthetic_responses(in.questions, 17);
  emit_report(run_comparison(in), tmp / "a");
  emit_report(run_comparison(in), tmp / "b");
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(tmp / "a")) {
    ++files;
    CHECK(slurp(entry.path()) == slurp(tmp / "b" / entry.path().filename()));
  }
  CHECK(files >= 7);
  CHECK(std::filesystem::exists(tmp / "a" / "figure_task1.csv"));
  std::filesystem::remove_all(tmp);
}

TEST_CASE("LCSS weights file") {
  const auto path = std::filesystem::temp_directory_path() / "idlabel_weights.csv";
  {
    std::ofstream out(path);
    write_lcss_weights(out, {0.25, -1.5, 2.0});
  }
  const auto w = load_lcss_weights(path);
  CHECK(w.sentiment == 0.25);
  CHECK(w.trait == -1.5);
  CHECK(w.association == 2.0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_lcss_weights(path), InputError);
}
