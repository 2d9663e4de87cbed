#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A structural invariant (unitarity, orthonormality, normalization) is violated.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Closed forms exist only for the Grover-derived families.
class UnsupportedFamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BranchTrackingError : public std::runtime_error {
 public:
  BranchTrackingError(const std::string& what, double k) : std::runtime_error(what), k_(k) {}

  // Wavenumber of the sample where continuation failed.
  double k() const noexcept { return k_; }

 private:
  double k_;
};

}  // namespace qwalk
