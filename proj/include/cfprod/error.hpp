#pragma once

#include <stdexcept>
#include <string>

namespace cfprod {

/// Input data violates a structural axiom (bad factor, non-bilinear form, broken fusion rule).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematically meaningful failure: obstructed datum, non-condensable subgroup,
/// degenerate input where non-degeneracy is required.
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Search or enumeration bound exceeded.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Reaching this is a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cfprod
