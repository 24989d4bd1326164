#pragma once

// Discrete choice layer: scores phi over candidate identities become a
// probability distribution p_j = exp(phi_j) / sum_k exp(phi_k).

#include <string>
#include <vector>

namespace idlabel {

struct ScoredCandidates {
  std::vector<std::string> labels;
  std::vector<double> phi;
};

struct LabelDistribution {
  std::vector<std::string> labels;
  std::vector<double> prob;
};

// Throws ModelError on an empty list, mismatched lengths or non-finite phi.
LabelDistribution softmax_distribution(const ScoredCandidates& s);

// Two-alternative case: 1 / (1 + exp(phi_b - phi_a)).
double binary_choice_prob(double phi_a, double phi_b);

// Highest-probability label; ties go to the lowest index.
const std::string& argmax_label(const LabelDistribution& d);

}  // namespace idlabel
