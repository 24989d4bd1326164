#pragma once

// Affect control theory core: EPA sentiment space, event fundamentals,
// impression change tau = Z g(f), and deflection.

#include <Eigen/Core>
#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace idlabel {

// A concept's location in Evaluation/Potency/Activity space.
struct EpaVector {
  double e = 0.0;
  double p = 0.0;
  double a = 0.0;

  EpaVector() = default;
  EpaVector(double e_, double p_, double a_);  // throws ModelError if not finite

  friend bool operator==(const EpaVector&, const EpaVector&) = default;
};

inline constexpr std::size_t kEventSlots = 9;
inline constexpr std::size_t kModifierSlots = 6;

// Slot layout of an event vector: actor, behavior, object; each E, P, A.
enum EventSlot : std::size_t { AE = 0, AP, AA, BE, BP, BA, OE, OP, OA };
// Slot layout of a modifier-identity combination: modifier first.
enum ModifierSlot : std::size_t { VE = 0, VP, VA, IE, IP, IA };

using EventVector = std::array<double, kEventSlots>;

// Fundamental sentiments f of an actor-behavior-object event.
class EventFundamental {
 public:
  explicit EventFundamental(const EventVector& values);
  EventFundamental(const EpaVector& actor, const EpaVector& behavior, const EpaVector& object);

  const EventVector& values() const { return values_; }
  double operator[](std::size_t slot) const { return values_[slot]; }

 private:
  EventVector values_;
};

// Post-event transient impressions tau, same layout as EventFundamental.
class TransientImpression {
 public:
  explicit TransientImpression(const EventVector& values);

  const EventVector& values() const { return values_; }
  double operator[](std::size_t slot) const { return values_[slot]; }

 private:
  EventVector values_;
};

// One covariate of g(.): the product of the input slots it names. Indices
// form a multiset, so {1,1} squares slot 1; the empty term is the constant 1.
using CovariateTerm = std::vector<std::size_t>;

// A regression of the form out = Z g(in) over a fixed input slot layout.
// Z has one row per output and one column per covariate term.
class CovariateModel {
 public:
  CovariateModel(std::size_t input_slots, std::vector<CovariateTerm> terms, Eigen::MatrixXd coefficients);

  std::size_t input_slots() const { return input_slots_; }
  std::size_t output_count() const { return static_cast<std::size_t>(coefficients_.rows()); }
  const std::vector<CovariateTerm>& terms() const { return terms_; }
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }

  // g(in): entry j is the product of `in` at the indices of term j.
  Eigen::VectorXd expand(std::span<const double> in) const;
  // Z g(in)
  Eigen::VectorXd apply(std::span<const double> in) const;

  // Linear terms for every input slot with Z = I (requires outputs == inputs).
  static CovariateModel identity(std::size_t slots);

 private:
  std::size_t input_slots_;
  std::vector<CovariateTerm> terms_;
  Eigen::MatrixXd coefficients_;
};

// Impression-change equations over the 9-slot event layout, 9 outputs.
class CoefficientModel : public CovariateModel {
 public:
  CoefficientModel(std::vector<CovariateTerm> terms, Eigen::MatrixXd coefficients);
  static CoefficientModel identity();
};

// Modifier-identity amalgamation over [v_e,v_p,v_a,i_e,i_p,i_a], 3 outputs.
class ModifierModel : public CovariateModel {
 public:
  ModifierModel(std::vector<CovariateTerm> terms, Eigen::MatrixXd coefficients);
  // Returns the identity EPA unchanged.
  static ModifierModel passthrough();
};

// Per-slot deflection weights, all nonnegative; defaults to ones.
class DeflectionWeights {
 public:
  DeflectionWeights();
  explicit DeflectionWeights(const EventVector& w);

  const EventVector& values() const { return w_; }
  double operator[](std::size_t slot) const { return w_[slot]; }

 private:
  EventVector w_;
};

enum class EventRole { actor, object };

struct ModifierApplication {
  EpaVector modifier;
  const ModifierModel& model;
};

Eigen::VectorXd expand_covariates(const EventFundamental& f, const CoefficientModel& model);

EpaVector apply_modifier(const EpaVector& modifier, const EpaVector& identity, const ModifierModel& model);

TransientImpression impression_change(const EventFundamental& f, const CoefficientModel& model);

// sum_j w_j (f_j - tau_j)^2 with tau = Z g(f).
double deflection(const EventFundamental& f, const CoefficientModel& model,
                  const DeflectionWeights& w = DeflectionWeights{});

// Builds the event with `candidate` in the actor or object position and
// returns the negated deflection. A modifier, if given, is combined with the
// candidate first.
double act_phi(const EpaVector& candidate, const EpaVector& behavior, const EpaVector& other, EventRole role,
               const CoefficientModel& model, const DeflectionWeights& w = DeflectionWeights{},
               const std::optional<ModifierApplication>& modifier = std::nullopt);

// Coefficient files: one line per covariate term, a term token (`1`, `AE`,
// `AE*BE`, ...) followed by the Z column for that term. Blank lines and
// lines starting with '#' are skipped.
CoefficientModel parse_coefficients(std::istream& in, const std::string& source_name = "<coefficients>");
CoefficientModel load_coefficients(const std::filesystem::path& path);
ModifierModel parse_modifier_coefficients(std::istream& in, const std::string& source_name = "<modifier>");
ModifierModel load_modifier_coefficients(const std::filesystem::path& path);

// Parses a term token against a slot vocabulary, e.g. "AE*BE" -> {0, 3}.
CovariateTerm parse_term(const std::string& token, std::span<const std::string_view> slot_names);

}  // namespace idlabel
