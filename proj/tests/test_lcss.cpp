#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "idlabel/choice.hpp"
#include "idlabel/error.hpp"
#include "idlabel/lcss.hpp"
#include "test_support.hpp"

using namespace idlabel;
using namespace idlabel::testing;

namespace {

ExtendedFundamental random_extended(std::mt19937_64& rng, std::size_t t, std::size_t k) {
  std::uniform_real_distribution<double> u(-4.3, 4.3);
  ExtendedFundamental f{EventFundamental(random_event(rng)), {}, {}};
  for (std::size_t i = 0; i < 2 * t; ++i) f.traits.push_back(u(rng));
  for (std::size_t i = 0; i < 2 * k; ++i) f.associations.push_back(u(rng));
  return f;
}

CovariateModel zero_block(std::size_t n) {
  return CovariateModel(n, {{}}, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), 1));
}

// Weighted squared residual of one block, evaluated term by term.
double block_oracle(const CovariateModel& m, const std::vector<double>& in) {
  double sum = 0.0;
  for (std::size_t r = 0; r < m.output_count(); ++r) {
    double tau = 0.0;
    for (std::size_t j = 0; j < m.terms().size(); ++j) {
      double prod = 1.0;
      for (auto s : m.terms()[j]) prod *= in[s];
      tau += m.coefficients()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) * prod;
    }
    sum += (in[r] - tau) * (in[r] - tau);
  }
  return sum;
}

}  // namespace

TEST_CASE("full deflection examples") {
  ExtendedFundamental ones{EventFundamental(EventVector{1, 1, 1, 1, 1, 1, 1, 1, 1}), {1, 1}, {1, 1}};
  const BlockCoefficientModel identity(CoefficientModel::identity(), CovariateModel::identity(2),
                                       CovariateModel::identity(2));
  CHECK(lcss_deflection_full(ones, identity, std::vector<double>(13, 1.0)) == 0.0);
  const BlockCoefficientModel zero(zero_model(), zero_block(2), zero_block(2));
  CHECK(lcss_deflection_full(ones, zero, std::vector<double>(13, 1.0)) == doctest::Approx(13.0));
  CHECK_THROWS_AS(lcss_deflection_full(ones, zero, std::vector<double>(12, 1.0)), ModelError);
  ExtendedFundamental wrong{ones.sentiment, {1}, {1, 1}};
  CHECK_THROWS_AS(lcss_deflection_full(wrong, zero, std::vector<double>(12, 1.0)), ModelError);

  const Eigen::MatrixXd z = zero.assembled_matrix();
  CHECK(z.rows() == 13);
  CHECK(z.block(9, 0, 4, 1).isZero());
}

TEST_CASE("empty extension reduces to ACT deflection") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    const auto model = random_coefficient_model(rng);
    const auto f = random_extended(rng, 0, 0);
    const BlockCoefficientModel block(model, zero_block(0), zero_block(0));
    const double act = deflection(f.sentiment, model);
    CHECK(lcss_deflection_full(f, block, std::vector<double>(9, 1.0)) == doctest::Approx(act).epsilon(1e-12));
    CHECK(lcss_deflection_decomposed(f, block, {9.0, 1.0, 1.0}).first == doctest::Approx(act).epsilon(1e-12));
  }
}

TEST_CASE("decomposed deflection examples") {
  ComponentDeflections d;
  d.sentiment = 9.0;
  d.trait = 4.0;
  d.trait_length = 4;
  d.association_length = 2;
  CHECK(combine_deflections(d, {1, 1, 1}) == doctest::Approx(2.0));
  CHECK(combine_deflections(d, {1, 0, 0}) == doctest::Approx(1.0));
  d.trait_length = 0;
  CHECK(combine_deflections(d, {1, 5, 1}) == doctest::Approx(1.0));
}

TEST_CASE("decomposition equals the block-diagonal full form") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<std::size_t> len(1, 3);
  std::uniform_real_distribution<double> w(-2.0, 3.0);
  for (int i = 0; i < 300; ++i) {
    const std::size_t t = len(rng), k = len(rng);
    const BlockCoefficientModel model(random_coefficient_model(rng), random_covariate_model(rng, 2 * t, 2 * t),
                                      random_covariate_model(rng, 2 * k, 2 * k));
    const auto f = random_extended(rng, t, k);
    const LcssWeights weights{w(rng), w(rng), w(rng)};
    const auto [value, parts] = lcss_deflection_decomposed(f, model, weights);
    const double full = lcss_deflection_full(f, model, decomposed_slot_weights(f, weights));
    CHECK(std::abs(value - full) <= 1e-10 * std::max(1.0, std::abs(full)));

    CHECK(parts.sentiment == doctest::Approx(block_oracle(model.sentiment(), {f.sentiment.values().begin(),
                                                                              f.sentiment.values().end()})));
    CHECK(parts.trait == doctest::Approx(block_oracle(model.trait(), f.traits)));
    CHECK(parts.association == doctest::Approx(block_oracle(model.association(), f.associations)));
    CHECK(parts.trait_length == 2 * t);
    CHECK(parts.association_length == 2 * k);
  }
}

TEST_CASE("block model rejects non-square blocks") {
  CHECK_THROWS_AS(BlockCoefficientModel(zero_model(), CovariateModel(2, {{}}, Eigen::MatrixXd::Zero(3, 1)),
                                        zero_block(2)),
                  ModelError);
}

TEST_CASE("scored semantic deflections on shipped vignettes") {
  const ScoreTable table(load_handcoded_betas(data_path("handcoded_scores.csv")));
  const auto questions = shipped_questions();
  const auto& q = find_question(questions, "Q2-01");  // soccer coach: soccer player vs shop clerk
  CHECK(scored_semantic_deflections(q, "soccer player", table).association == 0.0);
  CHECK(scored_semantic_deflections(q, "shop clerk", table).association == 4.0);
  CHECK(scored_semantic_deflections(q, "shop clerk", table).trait == 0.0);

  const auto& ethel = find_question(questions, "Q1-01");
  CHECK(scored_semantic_deflections(ethel, "grandmother", table).trait == 0.0);
  CHECK(scored_semantic_deflections(ethel, "bully", table).trait == 3.0);
  CHECK(scored_semantic_deflections(ethel, "bully", table).association == 0.0);

  for (const auto& question : questions) {
    for (const auto& answer : question.answers) {
      const auto d = scored_semantic_deflections(question, answer, table);
      CHECK(d.trait >= 0.0);
      CHECK(d.association >= 0.0);
      if (question.cue_is_someone()) {
        CHECK(d.trait == 0.0);
        CHECK(d.association == 0.0);
      }
    }
  }
}

TEST_CASE("lcss probability") {
  const ScoreTable table(load_handcoded_betas(data_path("handcoded_scores.csv")));
  const auto ctx = fixture_context();
  const auto questions = shipped_questions();
  const auto& q = find_question(questions, "Q2-01");
  CHECK(lcss_probability(q, {0, 0, 1}, ctx, table) == doctest::Approx(0.982014).epsilon(1e-6));
  CHECK(lcss_probability(q, {0, 0, 0}, ctx, table) == 0.5);

  for (const auto& question : questions) {
    const double da = act_question_deflection(question, question.answers[0], ctx);
    const double db = act_question_deflection(question, question.answers[1], ctx);
    CHECK(lcss_probability(question, {1, 0, 0}, ctx, table) ==
          doctest::Approx(binary_choice_prob(-da / 9.0, -db / 9.0)).epsilon(1e-12));
    const auto full = scored_component_deflections(question, question.answers[0], ctx, table);
    CHECK(full.sentiment == doctest::Approx(da));

    // Swapping the answers mirrors the probability.
    VignetteQuestion swapped = question;
    std::swap(swapped.answers[0], swapped.answers[1]);
    const LcssWeights w{0.7, 0.4, 0.9};
    CHECK(lcss_probability(question, w, ctx, table) + lcss_probability(swapped, w, ctx, table) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("lcss probability is monotone in each component") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    // p(a) = logistic(w . x) with x = d(b) - d(a); raising d(a) lowers p(a).
    const LcssWeights w{u(rng) + 0.1, u(rng) + 0.1, u(rng) + 0.1};
    ComponentDeflections a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    const double base = binary_choice_prob(-combine_deflections(a, w), -combine_deflections(b, w));
    ComponentDeflections worse = a;
    worse.trait += 1.0;
    CHECK(binary_choice_prob(-combine_deflections(worse, w), -combine_deflections(b, w)) < base);
  }
}

TEST_CASE("vignette file") {
  const auto qs = shipped_questions();
  int task1 = 0, task2 = 0;
  for (const auto& q : qs) (q.task == 1 ? task1 : task2)++;
  CHECK(task1 == 16);
  CHECK(task2 == 24);
  const auto& first = find_question(qs, "Q1-01");
  CHECK(first.cue == "Ethel");
  CHECK(label(first.trait) == "Old,Female");
  CHECK(first.object == std::optional<std::string>("enemy"));
  const auto& control = find_question(qs, "Q2-13");
  const auto& original = find_question(qs, "Q2-01");
  CHECK(control.cue == "someone");
  CHECK(control.behavior == original.behavior);
  CHECK(control.answers == original.answers);
  CHECK(control.association == AssociationCondition::none);
  CHECK_THROWS_AS(find_question(qs, "Q9-99"), InputError);

  std::istringstream bad(
      "question_id,task,cue,behavior,object,answer_a,answer_b,trait_condition,deflection_condition,"
      "association_condition\nQ,3,x,y,,a,b,,High,\n");
  CHECK_THROWS_WITH_AS(parse_vignettes(bad, "v.csv"), doctest::Contains("v.csv:2"), InputError);
}

TEST_CASE("ACT scoring of vignettes") {
  const auto ctx = fixture_context();
  const auto qs = shipped_questions();
  const auto& q1 = find_question(qs, "Q1-01");
  // Task 1: candidate is the actor, modified by the name.
  const auto ev = question_event(q1, "grandmother", ctx);
  const EpaVector modified =
      apply_modifier(ctx.names.at("Ethel"), ctx.dictionary.lookup("grandmother", ConceptType::identity), ctx.modifier);
  CHECK(ev[AE] == modified.e);
  CHECK(ev[OE] == ctx.dictionary.lookup("enemy", ConceptType::identity).e);
  const auto& q2 = find_question(qs, "Q1-02");
  CHECK(question_event(q2, "grandmother", ctx)[AE] == ctx.dictionary.lookup("grandmother", ConceptType::identity).e);
  // Task 2: cue is the actor, candidate is the object.
  const auto& t2 = find_question(qs, "Q2-01");
  const auto e2 = question_event(t2, "shop clerk", ctx);
  CHECK(e2[AP] == ctx.dictionary.lookup("soccer coach", ConceptType::identity).p);
  CHECK(e2[OA] == ctx.dictionary.lookup("shop clerk", ConceptType::identity).a);

  for (const auto& q : qs) {
    const double p = act_probability(q, ctx);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }

  ActContext missing = ctx;
  missing.names.erase("Ethel");
  CHECK_THROWS_AS(act_probability(q1, missing), InputError);
}
