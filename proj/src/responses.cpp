#include "idlabel/responses.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>

#include "idlabel/csv.hpp"
#include "idlabel/error.hpp"

namespace idlabel {

const VignetteQuestion& ResponseDataset::question(const std::string& id) const {
  const auto it = registry.find(id);
  if (it == registry.end()) throw InputError("unknown question id '" + id + "'");
  return it->second;
}

std::vector<std::string> ResponseDataset::respondents() const {
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.respondent);
  return {ids.begin(), ids.end()};
}

ResponseDataset make_dataset(std::vector<ResponseRecord> records, const std::vector<VignetteQuestion>& questions) {
  ResponseDataset data;
  for (const auto& q : questions) data.registry.emplace(q.id, q);
  for (const auto& r : records) {
    const auto& q = data.question(r.question_id);
    if (q.task != r.task) {
      throw InputError("response for " + r.question_id + " says task " + std::to_string(r.task) +
                       ", question is task " + std::to_string(q.task));
    }
    if (r.choice && *r.choice != 0 && *r.choice != 1) throw InputError("choice must be 0 or 1");
  }
  data.records = std::move(records);
  return data;
}

ResponseDataset parse_responses(std::istream& in, const std::vector<VignetteQuestion>& questions,
                                const std::string& source_name) {
  std::vector<ResponseRecord> records;
  std::set<std::string> known;
  for (const auto& q : questions) known.insert(q.id);
  for (const auto& row : csv::read(in, {"respondent_id", "task", "question_id", "choice"}, source_name)) {
    const std::string where = source_name + ":" + std::to_string(row.line);
    ResponseRecord r;
    r.respondent = row.fields[0];
    if (r.respondent.empty()) throw InputError(where + ": empty respondent id");
    r.task = static_cast<int>(csv::parse_integer(row.fields[1], where));
    r.question_id = row.fields[2];
    if (!known.contains(r.question_id)) throw InputError(where + ": unknown question id '" + r.question_id + "'");
    if (!row.fields[3].empty()) {
      const long choice = csv::parse_integer(row.fields[3], where);
      if (choice != 0 && choice != 1) throw InputError(where + ": choice must be 0 or 1");
      r.choice = static_cast<int>(choice);
    }
    records.push_back(std::move(r));
  }
  try {
    return make_dataset(std::move(records), questions);
  } catch (const InputError& e) {
    throw InputError(source_name + ": " + e.what());
  }
}

ResponseDataset load_responses(const std::filesystem::path& path, const std::vector<VignetteQuestion>& questions) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_responses(in, questions, path.string());
}

void write_responses(std::ostream& out, const ResponseDataset& data) {
  out << "respondent_id,task,question_id,choice\n";
  for (const auto& r : data.records) {
    out << csv::escape(r.respondent) << ',' << r.task << ',' << csv::escape(r.question_id) << ',';
    if (r.choice) out << *r.choice;
    out << '\n';
  }
}

std::map<std::string, ChoiceCount> choice_counts(const ResponseDataset& data) {
  std::map<std::string, ChoiceCount> counts;
  for (const auto& r : data.records) {
    if (!r.choice) continue;
    auto& c = counts[r.question_id];
    ++c.answered;
    if (*r.choice == 0) ++c.chose_first;
  }
  return counts;
}

}  // namespace idlabel
