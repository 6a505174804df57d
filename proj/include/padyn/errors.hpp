#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace padyn {

/// Invalid input: bad arguments, malformed documents, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical obstruction: the input is well formed but the requested
/// object does not exist (resonance, irrational eigenvalue, torsion, ...).
class ObstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Capped p-adic precision was not enough to decide a question.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace padyn

namespace padyn {

class IrrationalEigenvalue : public ObstructionError {
 public:
  using ObstructionError::ObstructionError;
};

class NotSemisimple : public ObstructionError {
 public:
  using ObstructionError::ObstructionError;
};

class EigenvaluesVary : public ObstructionError {
 public:
  using ObstructionError::ObstructionError;
};

class TorsionError : public ObstructionError {
 public:
  using ObstructionError::ObstructionError;
};

/// lambda^I = lambda_j with a nonzero coefficient to divide; j is 0-based.
class ResonantMonomial : public ObstructionError {
 public:
  ResonantMonomial(std::vector<int> exponents, int component, const std::string& what)
      : ObstructionError(what), exponents_(std::move(exponents)), component_(component) {}
  const std::vector<int>& exponents() const { return exponents_; }
  int component() const { return component_; }

 private:
  std::vector<int> exponents_;
  int component_;
};

}  // namespace padyn
