#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <utility>

#include "idlabel/affect.hpp"

namespace idlabel {

enum class ConceptType { identity, behavior, modifier };

std::string to_string(ConceptType type);

// EPA sentiment dictionary keyed by (term, concept type). Lookups of unknown
// terms throw; there is no default EPA.
class EpaDictionary {
 public:
  void add(const std::string& term, ConceptType type, const EpaVector& epa);
  bool contains(const std::string& term, ConceptType type) const;
  const EpaVector& lookup(const std::string& term, ConceptType type) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<ConceptType, std::string>, EpaVector> entries_;
};

// CSV with header `term,type,E,P,A`; type is identity, behavior or modifier.
EpaDictionary parse_dictionary(std::istream& in, const std::string& source_name = "<dictionary>");
EpaDictionary load_dictionary(const std::filesystem::path& path);

}  // namespace idlabel
