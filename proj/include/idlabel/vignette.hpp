#pragma once

// Survey vignettes and the ACT scoring of a vignette's candidate answers.

#include <array>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idlabel/affect.hpp"
#include "idlabel/dictionary.hpp"

namespace idlabel {

enum class TraitCondition { old_female, old_male, young_female, young_male, no_trait, not_applicable };
enum class DeflectionCondition { high, low };
enum class AssociationCondition { role_pair, same_institution, different_institution, none, not_applicable };

// Labels exactly as they appear in the vignette files; not_applicable is "".
std::string label(TraitCondition c);
std::string label(DeflectionCondition c);
std::string label(AssociationCondition c);

// Task 1: a (possibly named) actor does something to an object; the
// respondent labels the actor. Task 2: a known actor does something to an
// unlabeled person; the respondent labels that person.
struct VignetteQuestion {
  std::string id;
  int task = 1;
  std::string cue;
  std::string behavior;
  std::optional<std::string> object;  // Task 1 only
  std::array<std::string, 2> answers;
  TraitCondition trait = TraitCondition::not_applicable;
  DeflectionCondition deflection = DeflectionCondition::high;
  AssociationCondition association = AssociationCondition::not_applicable;

  bool cue_is_someone() const;
  // Human-readable question text, e.g. "Ethel attacking enemy: grandmother or bully?"
  std::string text() const;
};

// CSV with header
// question_id,task,cue,behavior,object,answer_a,answer_b,trait_condition,deflection_condition,association_condition
std::vector<VignetteQuestion> parse_vignettes(std::istream& in, const std::string& source_name = "<vignettes>");
std::vector<VignetteQuestion> load_vignettes(const std::filesystem::path& path);

const VignetteQuestion& find_question(const std::vector<VignetteQuestion>& questions, const std::string& id);

inline const std::vector<std::string> kSurveyNames = {"Ethel", "Harold", "Brittany", "Johnny"};

// Reads EPA ratings for name cues from a dictionary-format CSV. Names are
// taken from `modifier` rows; every name in `required` must be present.
std::map<std::string, EpaVector> load_name_epa(const std::filesystem::path& path,
                                               const std::vector<std::string>& required = kSurveyNames);
std::map<std::string, EpaVector> name_epa_from(const EpaDictionary& dict,
                                               const std::vector<std::string>& required = kSurveyNames);

// Everything ACT needs to score a vignette answer.
struct ActContext {
  EpaDictionary dictionary;
  CoefficientModel coefficients;
  ModifierModel modifier;
  std::map<std::string, EpaVector> names;
  DeflectionWeights weights;
};

// Event fundamental for a candidate answer. Task 1 puts the candidate in the
// actor slot, modified by the cue name's EPA unless the cue is "someone".
// Task 2 puts the cue identity in the actor slot (the dictionary must carry
// an identity entry for "someone") and the candidate in the object slot.
EventFundamental question_event(const VignetteQuestion& q, const std::string& candidate, const ActContext& ctx);

double act_question_deflection(const VignetteQuestion& q, const std::string& candidate, const ActContext& ctx);

// Probability of answers[0] under ACT: logistic in the deflection difference.
double act_probability(const VignetteQuestion& q, const ActContext& ctx);

}  // namespace idlabel
