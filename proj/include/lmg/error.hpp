#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lmg {

/// Raised when physical inputs violate their domain (N < 2, J <= 0, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The tridiagonal QL iteration exhausted its sweep budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::size_t block, const std::string& what)
      : std::runtime_error(what), block_(block) {}
  std::size_t block() const noexcept { return block_; }

 private:
  std::size_t block_;
};

/// Integration produced a state that violates the density-matrix invariants.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fit or extraction could not be performed on the supplied data.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lmg
