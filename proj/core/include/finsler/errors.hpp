#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input vector too close to the origin (fundamental tensor undefined there).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A Hessian that should be positive definite is not.
class ConvexityViolation : public Error {
 public:
  ConvexityViolation(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Norm parameters outside the admissible set (e.g. Randers b too long).
class InvalidNorm : public Error {
 public:
  using Error::Error;
};

/// Point outside the domain of the chart it claims to live in.
class ChartDomainError : public Error {
 public:
  using Error::Error;
};

/// Caller-asserted hypothesis failed when sampled.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

/// Fewer collocation rows than the assembly contract requires.
class UnderdeterminedSystem : public Error {
 public:
  using Error::Error;
};

/// A bracket left the span it was expected to stay in.
class ClosureFailure : public Error {
 public:
  ClosureFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Structure constants that fail antisymmetry/Jacobi, or a broken ideal check.
class InvalidAlgebra : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace finsler
