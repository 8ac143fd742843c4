#pragma once

#include <stdexcept>
#include <string>

namespace levysd {

// Argument outside an operation's documented domain.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Exponent magnitude would leave the double range (|u|*eps > 700).
class OverflowGuardError : public std::runtime_error {
 public:
  explicit OverflowGuardError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative solver exhausted its budget without meeting its contract.
class NoConvergenceError : public std::runtime_error {
 public:
  explicit NoConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Symmetric-only operation invoked on an asymmetric model.
class NotSymmetricError : public std::runtime_error {
 public:
  explicit NotSymmetricError(const std::string& msg) : std::runtime_error(msg) {}
};

// The exponential-tilt equation has no root: bounded variation with a
// non-vanishing effective drift. Callers switch to the |c|*t norming.
class DriftDominatedError : public std::runtime_error {
 public:
  DriftDominatedError(const std::string& msg, double effective_drift)
      : std::runtime_error(msg), effective_drift_(effective_drift) {}
  double effective_drift() const { return effective_drift_; }

 private:
  double effective_drift_;
};

class OutOfTableRangeError : public std::runtime_error {
 public:
  OutOfTableRangeError(const std::string& msg, double bound)
      : std::runtime_error(msg), bound_(bound) {}
  double violated_bound() const { return bound_; }

 private:
  double bound_;
};

class UnknownFamilyError : public std::runtime_error {
 public:
  explicit UnknownFamilyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Gaussian small-jump substitution requested where sigma(delta)/delta < 3.
class ApproximationUnsoundError : public std::runtime_error {
 public:
  explicit ApproximationUnsoundError(const std::string& msg) : std::runtime_error(msg) {}
};

class NotDriftDominatedError : public std::runtime_error {
 public:
  explicit NotDriftDominatedError(const std::string& msg) : std::runtime_error(msg) {}
};

class UnderflowRangeError : public std::runtime_error {
 public:
  explicit UnderflowRangeError(const std::string& msg) : std::runtime_error(msg) {}
};

class InsufficientGridError : public std::runtime_error {
 public:
  explicit InsufficientGridError(const std::string& msg) : std::runtime_error(msg) {}
};

class NoEstimableCellsError : public std::runtime_error {
 public:
  explicit NoEstimableCellsError(const std::string& msg) : std::runtime_error(msg) {}
};

class DegenerateModelError : public std::runtime_error {
 public:
  explicit DegenerateModelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Config file problem; carries the offending line number (0 = whole file).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace levysd
