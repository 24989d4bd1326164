#pragma once

#include <stdexcept>
#include <string>

namespace idlabel {

// Bad or missing input data: unparsable files, unknown tokens, vocabulary gaps.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model definition that violates its structural invariants.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Estimation could not produce usable estimates.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace idlabel
