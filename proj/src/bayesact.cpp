#include "idlabel/bayesact.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <fstream>

#include "idlabel/csv.hpp"
#include "idlabel/error.hpp"

namespace idlabel {

PotentialConfig::PotentialConfig() : sigma_inverse_(Eigen::Matrix<double, 9, 9>::Identity()) {}

PotentialConfig::PotentialConfig(Eigen::Matrix<double, 9, 9> sigma_inverse)
    : sigma_inverse_(std::move(sigma_inverse)) {
  if (!sigma_inverse_.allFinite()) throw ModelError("Sigma^-1 has a non-finite entry");
  if ((sigma_inverse_ - sigma_inverse_.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ModelError("Sigma^-1 is not symmetric");
  }
  const Eigen::LLT<Eigen::Matrix<double, 9, 9>> llt(sigma_inverse_);
  if (llt.info() != Eigen::Success) throw ModelError("Sigma^-1 is not positive definite");
}

PotentialConfig PotentialConfig::diagonal(const EventVector& weights) {
  Eigen::Matrix<double, 9, 9> m = Eigen::Matrix<double, 9, 9>::Zero();
  for (std::size_t i = 0; i < kEventSlots; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = weights[i];
  return PotentialConfig(m);
}

double bayesact_log_potential(const EventVector& f_prime, const EventVector& tau_prime, const PotentialConfig& cfg) {
  Eigen::Matrix<double, 9, 1> d;
  for (std::size_t i = 0; i < kEventSlots; ++i) d[static_cast<Eigen::Index>(i)] = f_prime[i] - tau_prime[i];
  return -d.dot(cfg.sigma_inverse() * d);
}

double bayesact_potential(const EventVector& f_prime, const EventVector& tau_prime, const PotentialConfig& cfg) {
  return std::exp(bayesact_log_potential(f_prime, tau_prime, cfg));
}

LabelDistribution bayesact_choice(const std::vector<PotentialCandidate>& candidates, const PotentialConfig& cfg) {
  if (candidates.empty()) throw ModelError("BayesACT choice over an empty candidate set");
  ScoredCandidates scored;
  for (const auto& c : candidates) {
    scored.labels.push_back(c.label);
    scored.phi.push_back(bayesact_log_potential(c.f_prime, c.tau_prime, cfg));
  }
  return softmax_distribution(scored);
}

PotentialConfig parse_sigma_inverse(std::istream& in, const std::string& source_name) {
  Eigen::Matrix<double, 9, 9> m;
  std::string line;
  std::size_t line_no = 0;
  int row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = csv::trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (row == 9) throw InputError(where + ": more than 9 rows");
    const auto fields = csv::split_line(stripped);
    if (fields.size() != 9) throw InputError(where + ": expected 9 values, got " + std::to_string(fields.size()));
    for (int c = 0; c < 9; ++c) m(row, c) = csv::parse_real(fields[static_cast<std::size_t>(c)], where);
    ++row;
  }
  if (row != 9) throw InputError(source_name + ": expected 9 rows, got " + std::to_string(row));
  try {
    return PotentialConfig(m);
  } catch (const ModelError& e) {
    throw InputError(source_name + ": " + e.what());
  }
}

PotentialConfig load_sigma_inverse(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_sigma_inverse(in, path.string());
}

}  // namespace idlabel
