#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orbitlink {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (non-connected shift, bad roof, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An iterative solver ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, std::vector<double> trace = {})
      : Error(what), residual_(residual), trace_(std::move(trace)) {}
  double residual() const { return residual_; }
  const std::vector<double>& trace() const { return trace_; }

 private:
  double residual_;
  std::vector<double> trace_;
};

/// Root search could not enclose a sign change.
class BracketError : public Error {
 public:
  BracketError(const std::string& what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_, hi_;
};

/// Evaluation outside the domain of a kernel (coincident points, curves too close).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Curve construction or projection failed (self-intersection, degenerate projection).
class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbitlink
