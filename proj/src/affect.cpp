#include "idlabel/affect.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "idlabel/csv.hpp"
#include "idlabel/error.hpp"

namespace idlabel {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ModelError(std::string(what) + " contains a non-finite entry");
  }
}

constexpr std::array<std::string_view, kEventSlots> kEventSlotNames = {"AE", "AP", "AA", "BE", "BP",
                                                                       "BA", "OE", "OP", "OA"};
constexpr std::array<std::string_view, kModifierSlots> kModifierSlotNames = {"VE", "VP", "VA",
                                                                             "IE", "IP", "IA"};

}  // namespace

EpaVector::EpaVector(double e_, double p_, double a_) : e(e_), p(p_), a(a_) {
  if (!std::isfinite(e) || !std::isfinite(p) || !std::isfinite(a)) {
    throw ModelError("EPA vector has a non-finite component");
  }
}

EventFundamental::EventFundamental(const EventVector& values) : values_(values) {
  require_finite(values_, "event fundamental");
}

EventFundamental::EventFundamental(const EpaVector& actor, const EpaVector& behavior, const EpaVector& object)
    : EventFundamental(EventVector{actor.e, actor.p, actor.a, behavior.e, behavior.p, behavior.a, object.e,
                                   object.p, object.a}) {}

TransientImpression::TransientImpression(const EventVector& values) : values_(values) {
  require_finite(values_, "transient impression");
}

CovariateModel::CovariateModel(std::size_t input_slots, std::vector<CovariateTerm> terms,
                               Eigen::MatrixXd coefficients)
    : input_slots_(input_slots), terms_(std::move(terms)), coefficients_(std::move(coefficients)) {
  for (auto& term : terms_) {
    for (std::size_t index : term) {
      if (index >= input_slots_) {
        throw ModelError("covariate term index " + std::to_string(index) + " outside 0.." +
                         std::to_string(input_slots_ - 1));
      }
    }
    std::sort(term.begin(), term.end());
  }
  if (static_cast<std::size_t>(coefficients_.cols()) != terms_.size()) {
    throw ModelError("coefficient matrix has " + std::to_string(coefficients_.cols()) + " columns for " +
                     std::to_string(terms_.size()) + " covariate terms");
  }
  if (!coefficients_.allFinite()) throw ModelError("coefficient matrix contains a non-finite entry");
}

Eigen::VectorXd CovariateModel::expand(std::span<const double> in) const {
  if (in.size() != input_slots_) {
    throw ModelError("covariate input has " + std::to_string(in.size()) + " slots, model expects " +
                     std::to_string(input_slots_));
  }
  Eigen::VectorXd g(static_cast<Eigen::Index>(terms_.size()));
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    double product = 1.0;
    for (std::size_t index : terms_[j]) product *= in[index];
    g[static_cast<Eigen::Index>(j)] = product;
  }
  return g;
}

Eigen::VectorXd CovariateModel::apply(std::span<const double> in) const { return coefficients_ * expand(in); }

CovariateModel CovariateModel::identity(std::size_t slots) {
  std::vector<CovariateTerm> terms;
  for (std::size_t i = 0; i < slots; ++i) terms.push_back({i});
  const auto n = static_cast<Eigen::Index>(slots);
  return CovariateModel(slots, std::move(terms), Eigen::MatrixXd::Identity(n, n));
}

CoefficientModel::CoefficientModel(std::vector<CovariateTerm> terms, Eigen::MatrixXd coefficients)
    : CovariateModel(kEventSlots, std::move(terms), std::move(coefficients)) {
  if (output_count() != kEventSlots) {
    throw ModelError("impression-change matrix must have 9 rows, got " + std::to_string(output_count()));
  }
}

CoefficientModel CoefficientModel::identity() {
  auto base = CovariateModel::identity(kEventSlots);
  return CoefficientModel(base.terms(), base.coefficients());
}

ModifierModel::ModifierModel(std::vector<CovariateTerm> terms, Eigen::MatrixXd coefficients)
    : CovariateModel(kModifierSlots, std::move(terms), std::move(coefficients)) {
  if (output_count() != 3) {
    throw ModelError("modifier matrix must have 3 rows, got " + std::to_string(output_count()));
  }
}

ModifierModel ModifierModel::passthrough() {
  std::vector<CovariateTerm> terms = {{IE}, {IP}, {IA}};
  return ModifierModel(std::move(terms), Eigen::MatrixXd::Identity(3, 3));
}

DeflectionWeights::DeflectionWeights() { w_.fill(1.0); }

DeflectionWeights::DeflectionWeights(const EventVector& w) : w_(w) {
  for (double v : w_) {
    if (!std::isfinite(v) || v < 0.0) throw ModelError("deflection weights must be finite and nonnegative");
  }
}

Eigen::VectorXd expand_covariates(const EventFundamental& f, const CoefficientModel& model) {
  return model.expand(f.values());
}

EpaVector apply_modifier(const EpaVector& modifier, const EpaVector& identity, const ModifierModel& model) {
  const std::array<double, kModifierSlots> in = {modifier.e, modifier.p, modifier.a,
                                                 identity.e, identity.p, identity.a};
  const Eigen::VectorXd out = model.apply(in);
  return EpaVector(out[0], out[1], out[2]);
}

TransientImpression impression_change(const EventFundamental& f, const CoefficientModel& model) {
  const Eigen::VectorXd tau = model.apply(f.values());
  EventVector values{};
  for (std::size_t i = 0; i < kEventSlots; ++i) values[i] = tau[static_cast<Eigen::Index>(i)];
  return TransientImpression(values);
}

double deflection(const EventFundamental& f, const CoefficientModel& model, const DeflectionWeights& w) {
  const TransientImpression tau = impression_change(f, model);
  double total = 0.0;
  for (std::size_t j = 0; j < kEventSlots; ++j) {
    const double diff = f[j] - tau[j];
    total += w[j] * diff * diff;
  }
  return total;
}

double act_phi(const EpaVector& candidate, const EpaVector& behavior, const EpaVector& other, EventRole role,
               const CoefficientModel& model, const DeflectionWeights& w,
               const std::optional<ModifierApplication>& modifier) {
  const EpaVector self = modifier ? apply_modifier(modifier->modifier, candidate, modifier->model) : candidate;
  const EventFundamental f = role == EventRole::actor ? EventFundamental(self, behavior, other)
                                                      : EventFundamental(other, behavior, self);
  return -deflection(f, model, w);
}

CovariateTerm parse_term(const std::string& token, std::span<const std::string_view> slot_names) {
  const std::string t = csv::trim(token);
  if (t == "1") return {};
  CovariateTerm term;
  std::stringstream parts(t);
  std::string part;
  while (std::getline(parts, part, '*')) {
    std::string upper = csv::trim(part);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    const auto it = std::find(slot_names.begin(), slot_names.end(), upper);
    if (it == slot_names.end()) throw ModelError("unknown slot token '" + part + "' in term '" + token + "'");
    term.push_back(static_cast<std::size_t>(it - slot_names.begin()));
  }
  if (term.empty()) throw ModelError("empty covariate term '" + token + "'");
  return term;
}

namespace {

std::pair<std::vector<CovariateTerm>, Eigen::MatrixXd> parse_covariate_lines(
    std::istream& in, const std::string& source_name, std::span<const std::string_view> slot_names,
    std::size_t outputs) {
  std::vector<CovariateTerm> terms;
  std::vector<std::vector<double>> columns;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = csv::trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    std::istringstream fields(stripped);
    std::string token;
    fields >> token;
    try {
      terms.push_back(parse_term(token, slot_names));
    } catch (const ModelError& e) {
      throw ModelError(where + ": " + e.what());
    }
    std::vector<double> column;
    std::string number;
    while (fields >> number) column.push_back(csv::parse_real(number, where));
    if (column.size() != outputs) {
      throw ModelError(where + ": term '" + token + "' has " + std::to_string(column.size()) +
                       " coefficients, expected " + std::to_string(outputs));
    }
    columns.push_back(std::move(column));
  }
  if (terms.empty()) throw ModelError(source_name + ": no covariate terms");
  Eigen::MatrixXd z(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t r = 0; r < outputs; ++r) {
      z(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = columns[j][r];
    }
  }
  return {std::move(terms), std::move(z)};
}

}  // namespace

CoefficientModel parse_coefficients(std::istream& in, const std::string& source_name) {
  auto [terms, z] = parse_covariate_lines(in, source_name, kEventSlotNames, kEventSlots);
  return CoefficientModel(std::move(terms), std::move(z));
}

CoefficientModel load_coefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_coefficients(in, path.string());
}

ModifierModel parse_modifier_coefficients(std::istream& in, const std::string& source_name) {
  auto [terms, z] = parse_covariate_lines(in, source_name, kModifierSlotNames, 3);
  return ModifierModel(std::move(terms), std::move(z));
}

ModifierModel load_modifier_coefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_modifier_coefficients(in, path.string());
}

}  // namespace idlabel
