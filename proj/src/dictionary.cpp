#include "idlabel/dictionary.hpp"

#include <fstream>

#include "idlabel/csv.hpp"
#include "idlabel/error.hpp"

namespace idlabel {

std::string to_string(ConceptType type) {
  switch (type) {
    case ConceptType::identity: return "identity";
    case ConceptType::behavior: return "behavior";
    case ConceptType::modifier: return "modifier";
  }
  return "?";
}

void EpaDictionary::add(const std::string& term, ConceptType type, const EpaVector& epa) {
  if (!entries_.emplace(std::make_pair(type, term), epa).second) {
    throw InputError("duplicate " + to_string(type) + " '" + term + "' in dictionary");
  }
}

bool EpaDictionary::contains(const std::string& term, ConceptType type) const {
  return entries_.contains({type, term});
}

const EpaVector& EpaDictionary::lookup(const std::string& term, ConceptType type) const {
  const auto it = entries_.find({type, term});
  if (it == entries_.end()) {
    throw InputError("no EPA entry for " + to_string(type) + " '" + term + "'");
  }
  return it->second;
}

EpaDictionary parse_dictionary(std::istream& in, const std::string& source_name) {
  EpaDictionary dict;
  for (const auto& row : csv::read(in, {"term", "type", "E", "P", "A"}, source_name)) {
    const std::string where = source_name + ":" + std::to_string(row.line);
    const std::string& kind = row.fields[1];
    ConceptType type;
    if (kind == "identity") type = ConceptType::identity;
    else if (kind == "behavior") type = ConceptType::behavior;
    else if (kind == "modifier") type = ConceptType::modifier;
    else throw InputError(where + ": unknown concept type '" + kind + "'");
    if (row.fields[0].empty()) throw InputError(where + ": empty term");
    const EpaVector epa(csv::parse_real(row.fields[2], where), csv::parse_real(row.fields[3], where),
                        csv::parse_real(row.fields[4], where));
    try {
      dict.add(row.fields[0], type, epa);
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return dict;
}

EpaDictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_dictionary(in, path.string());
}

}  // namespace idlabel
