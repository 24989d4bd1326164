#include "idlabel/vignette.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "idlabel/choice.hpp"
#include "idlabel/csv.hpp"
#include "idlabel/error.hpp"
#include "idlabel/pcs.hpp"

namespace idlabel {

std::string label(TraitCondition c) {
  switch (c) {
    case TraitCondition::old_female: return "Old,Female";
    case TraitCondition::old_male: return "Old,Male";
    case TraitCondition::young_female: return "Young,Female";
    case TraitCondition::young_male: return "Young,Male";
    case TraitCondition::no_trait: return "No trait";
    case TraitCondition::not_applicable: return "";
  }
  return "";
}

std::string label(DeflectionCondition c) { return c == DeflectionCondition::high ? "High" : "Low"; }

std::string label(AssociationCondition c) {
  switch (c) {
    case AssociationCondition::role_pair: return "High (Role Pair)";
    case AssociationCondition::same_institution: return "Medium (Same Institution)";
    case AssociationCondition::different_institution: return "Low (Different Institution)";
    case AssociationCondition::none: return "None";
    case AssociationCondition::not_applicable: return "";
  }
  return "";
}

bool VignetteQuestion::cue_is_someone() const { return cue == kSomeoneCue; }

std::string VignetteQuestion::text() const {
  std::string s = cue + " " + behavior;
  if (object) s += " " + *object;
  return s + ": " + answers[0] + " or " + answers[1] + "?";
}

namespace {

template <typename Enum, std::size_t N>
Enum parse_label(const std::string& text, const std::array<Enum, N>& options, const std::string& what,
                 const std::string& where) {
  for (Enum option : options) {
    if (label(option) == text) return option;
  }
  throw InputError(where + ": unknown " + what + " condition '" + text + "'");
}

}  // namespace

std::vector<VignetteQuestion> parse_vignettes(std::istream& in, const std::string& source_name) {
  static const std::vector<std::string> header = {
      "question_id", "task",     "cue",             "behavior",             "object",
      "answer_a",    "answer_b", "trait_condition", "deflection_condition", "association_condition"};
  static constexpr std::array kTraits = {TraitCondition::old_female,   TraitCondition::old_male,
                                         TraitCondition::young_female, TraitCondition::young_male,
                                         TraitCondition::no_trait,     TraitCondition::not_applicable};
  static constexpr std::array kDeflections = {DeflectionCondition::high, DeflectionCondition::low};
  static constexpr std::array kAssociations = {
      AssociationCondition::role_pair, AssociationCondition::same_institution,
      AssociationCondition::different_institution, AssociationCondition::none,
      AssociationCondition::not_applicable};

  std::vector<VignetteQuestion> questions;
  std::set<std::string> ids;
  for (const auto& row : csv::read(in, header, source_name)) {
    const std::string where = source_name + ":" + std::to_string(row.line);
    const auto& f = row.fields;
    VignetteQuestion q;
    q.id = f[0];
    if (q.id.empty()) throw InputError(where + ": empty question id");
    if (!ids.insert(q.id).second) throw InputError(where + ": duplicate question id '" + q.id + "'");
    const long task = csv::parse_integer(f[1], where);
    if (task != 1 && task != 2) throw InputError(where + ": task must be 1 or 2");
    q.task = static_cast<int>(task);
    q.cue = f[2];
    q.behavior = f[3];
    if (!f[4].empty()) q.object = f[4];
    q.answers = {f[5], f[6]};
    q.trait = parse_label(f[7], kTraits, "trait", where);
    q.deflection = parse_label(f[8], kDeflections, "deflection", where);
    q.association = parse_label(f[9], kAssociations, "association", where);

    if (q.cue.empty() || q.behavior.empty() || q.answers[0].empty() || q.answers[1].empty()) {
      throw InputError(where + ": cue, behavior and both answers are required");
    }
    if (q.answers[0] == q.answers[1]) throw InputError(where + ": the two answers must differ");
    if (q.task == 1) {
      if (!q.object) throw InputError(where + ": Task 1 questions need an object");
      if (q.trait == TraitCondition::not_applicable || q.association != AssociationCondition::not_applicable) {
        throw InputError(where + ": Task 1 questions carry a trait condition and no association condition");
      }
      if (q.cue_is_someone() != (q.trait == TraitCondition::no_trait)) {
        throw InputError(where + ": the \"No trait\" condition goes with a \"someone\" cue and only with it");
      }
    } else {
      if (q.object) throw InputError(where + ": Task 2 questions have no object");
      if (q.association == AssociationCondition::not_applicable || q.trait != TraitCondition::not_applicable) {
        throw InputError(where + ": Task 2 questions carry an association condition and no trait condition");
      }
      if (q.cue_is_someone() != (q.association == AssociationCondition::none)) {
        throw InputError(where + ": the \"None\" association goes with a \"someone\" cue and only with it");
      }
    }
    questions.push_back(std::move(q));
  }
  return questions;
}

std::vector<VignetteQuestion> load_vignettes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_vignettes(in, path.string());
}

const VignetteQuestion& find_question(const std::vector<VignetteQuestion>& questions, const std::string& id) {
  const auto it = std::find_if(questions.begin(), questions.end(), [&](const auto& q) { return q.id == id; });
  if (it == questions.end()) throw InputError("unknown question id '" + id + "'");
  return *it;
}

std::map<std::string, EpaVector> name_epa_from(const EpaDictionary& dict, const std::vector<std::string>& required) {
  std::map<std::string, EpaVector> names;
  for (const auto& name : required) {
    if (!dict.contains(name, ConceptType::modifier)) {
      throw InputError("missing EPA rating for name '" + name + "'");
    }
    names.emplace(name, dict.lookup(name, ConceptType::modifier));
  }
  return names;
}

std::map<std::string, EpaVector> load_name_epa(const std::filesystem::path& path,
                                               const std::vector<std::string>& required) {
  return name_epa_from(load_dictionary(path), required);
}

EventFundamental question_event(const VignetteQuestion& q, const std::string& candidate, const ActContext& ctx) {
  const EpaVector& behavior = ctx.dictionary.lookup(q.behavior, ConceptType::behavior);
  const EpaVector& identity = ctx.dictionary.lookup(candidate, ConceptType::identity);
  if (q.task == 1) {
    EpaVector actor = identity;
    if (!q.cue_is_someone()) {
      const auto it = ctx.names.find(q.cue);
      if (it == ctx.names.end()) throw InputError("missing EPA rating for name '" + q.cue + "'");
      actor = apply_modifier(it->second, identity, ctx.modifier);
    }
    return EventFundamental(actor, behavior, ctx.dictionary.lookup(*q.object, ConceptType::identity));
  }
  return EventFundamental(ctx.dictionary.lookup(q.cue, ConceptType::identity), behavior, identity);
}

double act_question_deflection(const VignetteQuestion& q, const std::string& candidate, const ActContext& ctx) {
  const EpaVector& behavior = ctx.dictionary.lookup(q.behavior, ConceptType::behavior);
  const EpaVector& identity = ctx.dictionary.lookup(candidate, ConceptType::identity);
  if (q.task == 2) {
    const EpaVector& actor = ctx.dictionary.lookup(q.cue, ConceptType::identity);
    return -act_phi(identity, behavior, actor, EventRole::object, ctx.coefficients, ctx.weights);
  }
  const EpaVector& object = ctx.dictionary.lookup(*q.object, ConceptType::identity);
  std::optional<ModifierApplication> name;
  if (!q.cue_is_someone()) {
    const auto it = ctx.names.find(q.cue);
    if (it == ctx.names.end()) throw InputError("missing EPA rating for name '" + q.cue + "'");
    name.emplace(ModifierApplication{it->second, ctx.modifier});
  }
  return -act_phi(identity, behavior, object, EventRole::actor, ctx.coefficients, ctx.weights, name);
}

double act_probability(const VignetteQuestion& q, const ActContext& ctx) {
  return binary_choice_prob(-act_question_deflection(q, q.answers[0], ctx),
                            -act_question_deflection(q, q.answers[1], ctx));
}

}  // namespace idlabel
