#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace peri {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Non-manifold or otherwise invalid connectivity.
class TopologyError : public Error {
 public:
  using Error::Error;
};

class DegenerateTriangleError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. d <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnreachableError : public Error {
 public:
  using Error::Error;
};

/// The evaluate-correct loop did not reach the tolerance in max_iters sweeps.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// A force evaluation or state update produced NaN or infinity.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

}  // namespace peri
