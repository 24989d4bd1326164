#include "idlabel/choice.hpp"

#include <algorithm>
#include <cmath>

#include "idlabel/error.hpp"

namespace idlabel {

LabelDistribution softmax_distribution(const ScoredCandidates& s) {
  if (s.phi.empty()) throw ModelError("softmax over an empty candidate set");
  if (s.labels.size() != s.phi.size()) throw ModelError("candidate labels and scores differ in length");
  for (double v : s.phi) {
    if (!std::isfinite(v)) throw ModelError("non-finite candidate score");
  }
  const double top = *std::max_element(s.phi.begin(), s.phi.end());
  std::vector<double> prob(s.phi.size());
  double total = 0.0;
  for (std::size_t j = 0; j < prob.size(); ++j) {
    prob[j] = std::exp(s.phi[j] - top);
    total += prob[j];
  }
  for (double& p : prob) p /= total;
  return {s.labels, std::move(prob)};
}

double binary_choice_prob(double phi_a, double phi_b) {
  const double x = phi_a - phi_b;
  // Evaluate on the side where exp cannot overflow.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double ex = std::exp(x);
  return ex / (1.0 + ex);
}

const std::string& argmax_label(const LabelDistribution& d) {
  if (d.prob.empty() || d.prob.size() != d.labels.size()) throw ModelError("invalid label distribution");
  const auto it = std::max_element(d.prob.begin(), d.prob.end());  // first maximum
  return d.labels[static_cast<std::size_t>(it - d.prob.begin())];
}

}  // namespace idlabel
