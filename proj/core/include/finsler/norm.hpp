#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "finsler/types.hpp"

namespace finsler {

/// F(y) = sqrt(y^T Q y), Q symmetric positive definite.
struct EuclideanParams {
  Matrix q;
};

/// F(y) = sqrt(y^T a y) + b.y with the a-dual length of b below one.
struct RandersParams {
  Matrix a;
  Vector b;
};

/// Arbitrary user-supplied norm. `gradient` and `hessian` (of F, not of F^2/2)
/// are optional; empty functions mean "differentiate numerically".
struct GenericParams {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;
  std::string label = "generic";
};

enum class NormFamily { Euclidean, Randers, Generic };

/// A Minkowski norm on R^n. Immutable after construction.
class MinkowskiNorm {
 public:
  using Params = std::variant<EuclideanParams, RandersParams, GenericParams>;

  /// Throws InvalidNorm unless q is symmetric positive definite.
  static MinkowskiNorm euclidean(Matrix q);
  /// Throws InvalidNorm unless a is SPD and sqrt(b^T a^{-1} b) < 1.
  static MinkowskiNorm randers(Matrix a, Vector b);
  static MinkowskiNorm generic(int dim, GenericParams params);

  int dim() const noexcept { return dim_; }
  NormFamily family() const noexcept;
  const Params& params() const noexcept { return params_; }

  /// Closed-form families have analytic gradient and Hessian.
  bool has_analytic_gradient() const noexcept;
  bool has_analytic_hessian() const noexcept;

  double operator()(const Vector& y) const;
  double value(const Vector& y) const { return (*this)(y); }

  /// dF/dy at y != 0; central differences when no analytic gradient exists.
  Vector gradient(const Vector& y) const;

  /// Largest F(+-e_i): the length scale used for the degenerate-input floor.
  double scale() const noexcept { return scale_; }

 private:
  MinkowskiNorm(int dim, Params params);

  int dim_;
  Params params_;
  double scale_ = 1.0;
};

/// The norm y -> c * F(l y). Closed-form families stay closed-form.
MinkowskiNorm compose_linear(const MinkowskiNorm& norm, const Matrix& l,
                             double c = 1.0);

enum class DiffScheme { Analytic, FiniteDifference };

struct TensorOptions {
  DiffScheme scheme = DiffScheme::Analytic;
  /// Central-difference step, relative to |y|.
  double fd_step = 1e-5;
  /// Inputs with |y| * scale() below this are rejected.
  double degenerate_floor = 1e-8;
  /// Raise ConvexityViolation for a non positive-definite result.
  bool require_positive_definite = true;
  /// Positive-definiteness threshold on the smallest eigenvalue, relative to
  /// the largest.
  double definiteness_tol = 1e-12;
};

/// g_y: the Hessian of F^2/2 at y.
struct FundamentalTensor {
  Vector base;
  Matrix matrix;

  double operator()(const Vector& u, const Vector& v) const {
    return u.dot(matrix * v);
  }
};

/// Throws DegenerateInput for y near 0 and ConvexityViolation (carrying the
/// offending eigenvalue) when the result is not positive definite. Generic
/// norms without an analytic Hessian always use finite differences.
FundamentalTensor fundamental_tensor(const MinkowskiNorm& norm, const Vector& y,
                                     const TensorOptions& options = {});

struct AxiomTolerances {
  double homogeneity = 1e-10;  // relative |F(ly) - lF(y)| / (lF(y))
  double eigenvalue = 1e-6;    // min eig / max eig of g_y
  double fd_step = 1e-4;       // used when the norm lacks an analytic Hessian
};

struct AxiomReport {
  int samples = 0;
  double min_value = 0.0;
  double max_homogeneity_residual = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  Vector worst_direction;  // where the smallest eigenvalue was seen
  bool positive = false;
  bool homogeneous = false;
  bool strongly_convex = false;
  bool passed = false;
  std::vector<std::string> failures;
};

/// Samples unit directions (the +-e_i first, then seeded Gaussian directions)
/// and records positivity, homogeneity (l in {0.5, 2, 7}) and the spectrum of
/// the fundamental tensor. Never throws on a failing norm.
AxiomReport check_axioms(const MinkowskiNorm& norm, int samples,
                         std::uint64_t seed, const AxiomTolerances& tol = {});

/// sup F(y)/F(-y), symmetrized to be >= 1. Grid plus golden-section
/// refinement for n = 2; grid only above that. Requires resolution >= 8.
double reversibility_sup(const MinkowskiNorm& norm, int resolution);

}  // namespace finsler
