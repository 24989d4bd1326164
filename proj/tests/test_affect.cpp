#include <doctest.h>

#include <sstream>

#include "idlabel/affect.hpp"
#include "idlabel/dictionary.hpp"
#include "idlabel/error.hpp"
#include "test_support.hpp"

using namespace idlabel;
using idlabel::testing::random_coefficient_model;
using idlabel::testing::random_event;
using idlabel::testing::zero_model;

namespace {

EventVector with(std::initializer_list<std::pair<std::size_t, double>> set) {
  EventVector v{};
  v.fill(0.3);
  for (auto [slot, value] : set) v[slot] = value;
  return v;
}

}  // namespace

TEST_CASE("expand_covariates evaluates products of slots") {
  const EventFundamental f(with({{AE, 2.0}, {BE, 0.5}, {AP, 3.0}}));
  CHECK(expand_covariates(f, CoefficientModel({{}}, Eigen::MatrixXd::Zero(9, 1)))[0] == 1.0);

  const CoefficientModel lin({{AE}, {AE, BE}}, Eigen::MatrixXd::Zero(9, 2));
  const auto g = expand_covariates(f, lin);
  CHECK(g[0] == 2.0);
  CHECK(g[1] == 1.0);

  const CoefficientModel square({{AP, AP}}, Eigen::MatrixXd::Zero(9, 1));
  CHECK(expand_covariates(f, square)[0] == 9.0);
}

TEST_CASE("covariate model rejects malformed structure") {
  CHECK_THROWS_AS(CoefficientModel({{9}}, Eigen::MatrixXd::Zero(9, 1)), ModelError);
  CHECK_THROWS_AS(CoefficientModel({{0}}, Eigen::MatrixXd::Zero(8, 1)), ModelError);
  CHECK_THROWS_AS(CoefficientModel({{0}, {1}}, Eigen::MatrixXd::Zero(9, 1)), ModelError);
  CHECK_THROWS_AS(ModifierModel({{6}}, Eigen::MatrixXd::Zero(3, 1)), ModelError);
  CHECK_THROWS_AS(ModifierModel({{0}}, Eigen::MatrixXd::Zero(9, 1)), ModelError);
}

TEST_CASE("expand_covariates is multilinear in each slot") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> slot(0, 8);
  std::uniform_int_distribution<int> arity(0, 3);
  std::uniform_real_distribution<double> scale(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<CovariateTerm> terms;
    for (int k = 0; k < 6; ++k) {
      CovariateTerm t;
      for (int a = arity(rng); a > 0; --a) t.push_back(slot(rng));
      terms.push_back(t);
    }
    const CoefficientModel model(terms, Eigen::MatrixXd::Zero(9, 6));
    const EventVector base = random_event(rng);
    const std::size_t i = slot(rng);
    const double c = scale(rng);
    EventVector scaled = base;
    scaled[i] *= c;
    const auto g0 = expand_covariates(EventFundamental(base), model);
    const auto g1 = expand_covariates(EventFundamental(scaled), model);
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const auto power = std::count(model.terms()[j].begin(), model.terms()[j].end(), i);
      CHECK(g1[static_cast<Eigen::Index>(j)] ==
            doctest::Approx(g0[static_cast<Eigen::Index>(j)] * std::pow(c, power)).epsilon(1e-12));
    }
  }
}

TEST_CASE("apply_modifier") {
  const EpaVector mod(1.0, -2.0, 0.5);
  const EpaVector id(0.0, 1.5, -1.0);
  CHECK(apply_modifier(mod, id, ModifierModel::passthrough()) == id);
  CHECK(apply_modifier(mod, id, ModifierModel({{}}, Eigen::MatrixXd::Zero(3, 1))) == EpaVector(0, 0, 0));

  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 2);
  z(0, 0) = 0.5;
  z(0, 1) = 0.5;
  const ModifierModel average({{VE}, {IE}}, z);
  CHECK(apply_modifier(EpaVector(1, 0, 0), EpaVector(0, 0, 0), average).e == doctest::Approx(0.5));
}

TEST_CASE("impression_change") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const EventVector v = random_event(rng);
    CHECK(impression_change(EventFundamental(v), CoefficientModel::identity()).values() == v);
  }
  const EventFundamental f(with({{AE, 1.0}}));
  for (double t : impression_change(f, zero_model()).values()) CHECK(t == 0.0);

  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(9, 2);
  z(AE, 0) = 0.2;
  z(AE, 1) = 0.5;
  CHECK(impression_change(f, CoefficientModel({{}, {AE}}, z))[AE] == doctest::Approx(0.7));
}

TEST_CASE("deflection examples") {
  EventVector ones{};
  ones.fill(1.0);
  const EventFundamental f(ones);
  CHECK(deflection(f, CoefficientModel::identity()) == 0.0);
  CHECK(deflection(f, zero_model()) == doctest::Approx(9.0));
  EventVector w = ones;
  w[0] = 2.0;
  CHECK(deflection(f, zero_model(), DeflectionWeights(w)) == doctest::Approx(10.0));
  w[0] = -1.0;
  CHECK_THROWS_AS(DeflectionWeights{w}, ModelError);
}

TEST_CASE("deflection matches an independent squared-norm computation") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto model = random_coefficient_model(rng);
    const EventVector v = random_event(rng);
    // Oracle: evaluate tau term by term without the model's matrix product.
    Eigen::Matrix<double, 9, 1> diff;
    for (std::size_t r = 0; r < 9; ++r) {
      double tau = 0.0;
      for (std::size_t j = 0; j < model.terms().size(); ++j) {
        double prod = 1.0;
        for (auto s : model.terms()[j]) prod *= v[s];
        tau += model.coefficients()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) * prod;
      }
      diff[static_cast<Eigen::Index>(r)] = v[r] - tau;
    }
    const double d = deflection(EventFundamental(v), model);
    CHECK(d >= 0.0);
    CHECK(d == doctest::Approx(diff.squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("act_phi negates deflection and orders candidates") {
  const EpaVector candidate(1, 1, 1), behavior(1, 0, 0), object(0, 0, 0);
  CHECK(act_phi(candidate, behavior, object, EventRole::actor, zero_model()) == doctest::Approx(-4.0));
  CHECK(act_phi(candidate, behavior, object, EventRole::actor, CoefficientModel::identity()) == 0.0);
  // Object role places the candidate in the last three slots.
  CHECK(act_phi(candidate, behavior, EpaVector(2, 0, 0), EventRole::object, zero_model()) == doctest::Approx(-8.0));

  // Lower deflection, higher phi.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto model = random_coefficient_model(rng);
    const auto v = random_event(rng);
    const EpaVector a(v[0], v[1], v[2]), b(v[3], v[4], v[5]), c(v[6], v[7], v[8]);
    const EpaVector beh(0.5, -1.0, 2.0);
    const double da = deflection(EventFundamental(a, beh, c), model);
    const double db = deflection(EventFundamental(b, beh, c), model);
    const double pa = act_phi(a, beh, c, EventRole::actor, model);
    const double pb = act_phi(b, beh, c, EventRole::actor, model);
    if (da < db) CHECK(pa > pb);
    if (db < da) CHECK(pb > pa);
  }
}

TEST_CASE("act_phi applies the modifier to the candidate first") {
  const auto mod_model = ModifierModel({{VE}}, Eigen::MatrixXd::Identity(3, 1));  // E = v_e, P = A = 0
  const EpaVector name(3.0, 9.0, 9.0);
  const ModifierApplication app{name, mod_model};
  // Modified actor is (3,0,0); zero model deflection is 9.
  CHECK(act_phi(EpaVector(1, 1, 1), EpaVector(0, 0, 0), EpaVector(0, 0, 0), EventRole::actor, zero_model(),
                DeflectionWeights{}, app) == doctest::Approx(-9.0));
}

TEST_CASE("coefficient file parsing") {
  std::istringstream text(
      "# comment\n"
      "1      0 0 0 0 0 0 0 0 0.5\n"
      "AE     1 0 0 0 0 0 0 0 0\n"
      "ae*BE  0 0 0 0 0 0 0 0 2\n");
  const auto model = parse_coefficients(text);
  REQUIRE(model.terms().size() == 3);
  CHECK(model.terms()[0].empty());
  CHECK(model.terms()[2] == CovariateTerm{AE, BE});
  CHECK(model.coefficients()(OA, 2) == 2.0);

  std::istringstream bad_token("XX 0 0 0 0 0 0 0 0 0\n");
  CHECK_THROWS_AS(parse_coefficients(bad_token), ModelError);
  std::istringstream short_row("AE 0 0 0\n");
  CHECK_THROWS_WITH_AS(parse_coefficients(short_row, "z.txt"), doctest::Contains("z.txt:1"), ModelError);

  std::istringstream mod("1 0.1 0 0\nVE*IE 1 2 3\n");
  const auto m = parse_modifier_coefficients(mod);
  CHECK(m.terms()[1] == CovariateTerm{VE, IE});

  const auto fixture = load_coefficients(idlabel::testing::fixture_path("synthetic_coefficients.txt"));
  CHECK(fixture.terms().size() == 12);
  CHECK(load_modifier_coefficients(idlabel::testing::fixture_path("synthetic_modifier.txt")).terms().size() == 8);
}

TEST_CASE("EPA dictionary") {
  std::istringstream text(
      "term,type,E,P,A\n"
      "doctor,identity,2.5,2.3,0.4\n"
      "\"talk to, quietly\",behavior,1,0.5,-0.25\n"
      "Ethel,modifier,1.5,0.2,-1.0\n");
  const auto dict = parse_dictionary(text);
  CHECK(dict.size() == 3);
  CHECK(dict.lookup("doctor", ConceptType::identity) == EpaVector(2.5, 2.3, 0.4));
  CHECK(dict.lookup("talk to, quietly", ConceptType::behavior).a == -0.25);
  CHECK_THROWS_WITH_AS(dict.lookup("nurse", ConceptType::identity), doctest::Contains("nurse"), InputError);
  CHECK_THROWS_AS(dict.lookup("doctor", ConceptType::behavior), InputError);

  std::istringstream dup("term,type,E,P,A\nx,identity,1,1,1\nx,identity,1,1,1\n");
  CHECK_THROWS_WITH_AS(parse_dictionary(dup, "d.csv"), doctest::Contains("d.csv:3"), InputError);
  std::istringstream badtype("term,type,E,P,A\nx,setting,1,1,1\n");
  CHECK_THROWS_AS(parse_dictionary(badtype), InputError);
  std::istringstream nan("term,type,E,P,A\nx,identity,nan,1,1\n");
  CHECK_THROWS_AS(parse_dictionary(nan), InputError);
  std::istringstream header("term,kind,E,P,A\n");
  CHECK_THROWS_AS(parse_dictionary(header), InputError);
}
