#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace szilard {

// Bad input: parameters, flags or preconditions. Maps to CLI exit status 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not deliver its contract. Maps to exit status 2.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public ComputationError {
 public:
  ConvergenceError(const std::string& what, std::size_t index)
      : ComputationError(what + " (index " + std::to_string(index) + ")"), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Raised when the double-well spectrum does not split into isolated doublets.
class NoPairStructure : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace szilard
