#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idlabel/vignette.hpp"

namespace idlabel {

struct ResponseRecord {
  std::string respondent;
  int task = 1;
  std::string question_id;
  std::optional<int> choice;  // index into the question's answers; nullopt = missing
};

struct ResponseDataset {
  std::vector<ResponseRecord> records;
  std::map<std::string, VignetteQuestion> registry;

  const VignetteQuestion& question(const std::string& id) const;  // throws InputError
  std::vector<std::string> respondents() const;                  // sorted, unique
};

// Validates every record against the question registry.
ResponseDataset make_dataset(std::vector<ResponseRecord> records, const std::vector<VignetteQuestion>& questions);

// CSV `respondent_id,task,question_id,choice`; an empty choice is missing.
ResponseDataset parse_responses(std::istream& in, const std::vector<VignetteQuestion>& questions,
                                const std::string& source_name = "<responses>");
ResponseDataset load_responses(const std::filesystem::path& path, const std::vector<VignetteQuestion>& questions);

void write_responses(std::ostream& out, const ResponseDataset& data);

struct ChoiceCount {
  int chose_first = 0;
  int answered = 0;

  double proportion() const { return static_cast<double>(chose_first) / static_cast<double>(answered); }
};

// Per-question counts of answers[0] choices; missing responses are dropped.
// Questions without any answered record are absent from the map.
std::map<std::string, ChoiceCount> choice_counts(const ResponseDataset& data);

}  // namespace idlabel
