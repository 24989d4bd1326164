#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "idlabel/responses.hpp"

namespace idlabel {

// Mean of |predicted - empirical| over questions. Both maps must cover the
// same question ids.
double mean_absolute_error(const std::map<std::string, double>& predicted,
                           const std::map<std::string, double>& empirical);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Two-sided standard-normal critical value for a central `confidence` mass.
double normal_critical_value(double confidence);

// Adjusted-count binomial interval: n' = n + z^2, p' = (k + z^2/2) / n',
// p' +/- z sqrt(p'(1 - p') / n'), clipped to [0, 1].
Interval agresti_coull_interval(int k, int n, double confidence = 0.95);

struct BootstrapOptions {
  int replicates = 10000;
  std::uint64_t seed = 20240101;
  double confidence = 0.95;
};

// Percentile interval of the MAE between `predicted` and the per-question
// share choosing answers[0], resampling respondents with replacement.
// Replicate r draws from its own stream seeded by (seed, r). Questions left
// without answers in a replicate are skipped for that replicate.
Interval bootstrap_mae_ci(const ResponseDataset& data, const std::map<std::string, double>& predicted,
                          const BootstrapOptions& options = {});

}  // namespace idlabel
