#pragma once

// Point-mass reduction of the BayesACT potential
// q(f', tau') = exp(-(f' - tau')^T Sigma^-1 (f' - tau')), normalized over
// candidate identities as a discrete choice.

#include <Eigen/Core>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "idlabel/affect.hpp"
#include "idlabel/choice.hpp"

namespace idlabel {

class PotentialConfig {
 public:
  PotentialConfig();  // Sigma^-1 = I
  // Throws ModelError unless symmetric (1e-10) and positive definite.
  explicit PotentialConfig(Eigen::Matrix<double, 9, 9> sigma_inverse);
  static PotentialConfig diagonal(const EventVector& weights);

  const Eigen::Matrix<double, 9, 9>& sigma_inverse() const { return sigma_inverse_; }

 private:
  Eigen::Matrix<double, 9, 9> sigma_inverse_;
};

double bayesact_log_potential(const EventVector& f_prime, const EventVector& tau_prime, const PotentialConfig& cfg);
double bayesact_potential(const EventVector& f_prime, const EventVector& tau_prime, const PotentialConfig& cfg);

struct PotentialCandidate {
  std::string label;
  EventVector f_prime;
  EventVector tau_prime;
};

LabelDistribution bayesact_choice(const std::vector<PotentialCandidate>& candidates, const PotentialConfig& cfg);

// CSV of 9 rows by 9 reals, no header.
PotentialConfig parse_sigma_inverse(std::istream& in, const std::string& source_name = "<sigma>");
PotentialConfig load_sigma_inverse(const std::filesystem::path& path);

}  // namespace idlabel
