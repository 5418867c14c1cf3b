#pragma once

#include <stdexcept>
#include <string>

namespace gtlab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Instance too large for exhaustive enumeration.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Instance violates a structural precondition (unequal row weights, no
/// common item, split index out of range, ...).
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The entropy target H(δ) − ε is not positive, so the bound is vacuous.
class DegenerateTarget : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gtlab
