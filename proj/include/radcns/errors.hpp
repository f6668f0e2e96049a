#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace radcns {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid grid, solver or run parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An operation was handed data in the wrong representation or on mismatched grids.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of the operation (e.g. rho <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A Fourier multiplier or pointwise map produced a non-finite value.
class NumericDomainError : public Error {
 public:
  using Error::Error;
};

/// A dyadic block index the grid cannot represent.
class RangeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedParameterError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

/// The time integrator left the perturbative regime or produced non-finite values.
class SolverAbort : public Error {
 public:
  SolverAbort(const std::string& msg, double time, std::ptrdiff_t mode = -1)
      : Error(msg), time_(time), mode_(mode) {}

  double time() const noexcept { return time_; }
  /// Offending spectral/physical index, or -1 when not attributable to one node.
  std::ptrdiff_t mode() const noexcept { return mode_; }

 private:
  double time_;
  std::ptrdiff_t mode_;
};

}  // namespace radcns
