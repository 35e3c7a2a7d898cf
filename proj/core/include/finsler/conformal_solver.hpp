#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "finsler/finsler_field.hpp"
#include "finsler/lie_algebra.hpp"
#include "finsler/manifold.hpp"

namespace finsler {

/// Finite-dimensional ansatz for vector fields (`elements`) and conformal
/// factors (`rho_elements`) on a model manifold.
class FieldBasis {
 public:
  FieldBasis(ManifoldModel manifold, std::vector<VectorField> elements,
             std::vector<ScalarField> rho_elements, int degree, std::string description);

  /// e_d cos(2 pi k.s), e_d sin(2 pi k.s) for |k|_inf <= degree (one of each
  /// +-k pair), d = 0, 1; rho: the same scalar modes. Degree 2 gives 50 fields
  /// and 25 scalars. The two constant fields come first.
  static FieldBasis torus_fourier(const ManifoldModel& torus, int degree);

  /// The six conformal generators of the round sphere (rotations about the
  /// three axes, then the gradients of X1, X2, X3) followed by tangential
  /// projections of ambient monomial fields of degree 1..degree that enlarge
  /// the span; rho: ambient polynomials of degree <= max(degree, 1), pruned
  /// to an independent set on the sphere.
  static FieldBasis sphere_conformal(const ManifoldModel& sphere, int degree);

  const ManifoldModel& manifold() const noexcept { return manifold_; }
  const std::vector<VectorField>& elements() const noexcept { return elements_; }
  const std::vector<ScalarField>& rho_elements() const noexcept { return rho_elements_; }
  int size() const noexcept { return static_cast<int>(elements_.size()); }
  int rho_size() const noexcept { return static_cast<int>(rho_elements_.size()); }
  int degree() const noexcept { return degree_; }
  const std::string& description() const noexcept { return description_; }

  /// Numerical rank of the element evaluations at `points` (full rank means
  /// linearly independent elements).
  int numerical_rank(const std::vector<Point>& points, double tol = 1e-8) const;

  VectorField field(const Vector& coeffs, std::string label = {}) const;
  ScalarField rho(const Vector& coeffs) const;
  double rho_value(const Vector& coeffs, const Point& x) const;

 private:
  ManifoldModel manifold_;
  std::vector<VectorField> elements_;
  std::vector<ScalarField> rho_elements_;
  int degree_;
  std::string description_;
};

struct CollocationPair {
  Point x;
  Vector y;
};

/// Points from sample_points(manifold, grid, offset) (grid^2 Fibonacci
/// points on the sphere), each with `directions` equispaced unit directions
/// rotated by `angle_offset`, plus `random_directions` seeded ones.
std::vector<CollocationPair> make_collocation(const ManifoldModel& manifold, int grid, int directions,
                                              int random_directions, std::uint64_t seed,
                                              double offset = 0.0, double angle_offset = 0.0);

enum class SolveMode { Killing, Conformal };

/// One row per pair: [ (L_{B_a} F)/F | -phi_b(x) ] (the rho block only in
/// conformal mode). Rows are divided by F(x, y), which leaves the null space
/// unchanged. Throws UnderdeterminedSystem for fewer than 3 rows per unknown.
Matrix assemble_system(const FinslerField& field, const FieldBasis& basis,
                       const std::vector<CollocationPair>& collocation, SolveMode mode);

struct NullSpace {
  int dimension = 0;
  Matrix basis;             // orthonormal columns
  Vector singular_values;   // descending
  double threshold = 0.0;   // tol_ratio * sigma_max
  double gap = 0.0;         // smallest kept / largest discarded (inf if none discarded)
};

/// dimension = #{sigma_k < tol_ratio sigma_max} plus cols - rows when the
/// matrix is wide; everything when sigma_max = 0.
NullSpace null_space(const Matrix& a, double tol_ratio = 1e-8);

struct SolverConfig {
  int grid = 12;
  int directions = 8;
  int random_directions = 0;
  std::uint64_t seed = 1;
  double tol_ratio = 1e-8;
  /// Verified fields must have residual <= 10 * residual_tol.
  double residual_tol = 1e-8;
  /// Minimum acceptable spectral gap around the threshold.
  double min_gap = 1e2;
};

struct SolveReport {
  int killing_dim = 0;
  int conformal_dim = 0;
  int unknowns_killing = 0;
  int unknowns_conformal = 0;
  int rows = 0;
  Matrix killing_basis;       // element coefficients, one column per field
  Matrix conformal_basis;
  Matrix conformal_factors;   // rho coefficients, column j pairs with conformal_basis.col(j)
  std::vector<double> rho_fit_residuals;
  Vector singular_values_killing;
  Vector singular_values_conformal;
  double gap_killing = 0.0;
  double gap_conformal = 0.0;
  std::vector<double> killing_residuals;    // verification grid, per field
  std::vector<double> conformal_residuals;
  double max_residual = 0.0;
  double tolerance_used = 0.0;
  double residual_tol = 0.0;
  bool verified = false;         // every residual <= 10 * residual_tol
  bool ill_conditioned = false;  // a gap below min_gap
  bool spurious_rho = false;     // null vectors with vanishing field part
  double max_rho_norm = 0.0;     // largest |rho coefficients| over conformal fields
  std::vector<std::string> warnings;
};

/// Killing and conformal spaces of `field` within `basis`. The conformal
/// dimension is the rank of the field-coefficient projection of the
/// conformal null space; rho for each conformal field is refit by least
/// squares against (L_V F)/F.
SolveReport solve_fields(const FinslerField& field, const FieldBasis& basis, const SolverConfig& config = {});

std::vector<VectorField> killing_fields(const SolveReport& report, const FieldBasis& basis);
std::vector<VectorField> conformal_fields(const SolveReport& report, const FieldBasis& basis);

/// [V, W]^i = V^j d_j W^i - W^j d_j V^i at x.
Vector bracket_value(const VectorField& v, const VectorField& w, const Point& x);

struct BracketExpansion {
  Vector coefficients;
  double residual = 0.0;  // max abs misfit relative to max(1, max |[V,W]|)
  VectorField field;
};

/// [V, W] re-expanded in span(`span`) by least squares over `points`.
/// Throws ClosureFailure when the residual exceeds `tol`.
BracketExpansion lie_bracket_fields(const VectorField& v, const VectorField& w,
                                    const std::vector<VectorField>& span,
                                    const std::vector<Point>& points, double tol = 1e-6);

struct StructureConstants {
  LieAlgebra algebra;
  double closure_residual = 0.0;
  double antisymmetry_residual = 0.0;
  double jacobi_residual = 0.0;
};

/// c^k_ij from [f_i, f_j] = c^k_ij f_k. Throws ClosureFailure above `tol`.
StructureConstants extract_structure_constants(const std::vector<VectorField>& fields,
                                               const std::vector<Point>& points, double tol = 1e-6);

/// Per point: do the field values span the tangent space (rank at
/// threshold tol * sigma_max equals dim M)?
std::vector<bool> transitivity_check(const std::vector<VectorField>& fields, const std::vector<Point>& points,
                                     double tol = 1e-8);

/// Max relative least-squares misfit of Df(x) V(x) against span{W(f(x))}
/// over fields V in `fields` and the sample points: the sine of the angle
/// between f_*(span) and span.
double pushforward_residual(const std::vector<VectorField>& fields, const Diffeomorphism& f,
                            const std::vector<Point>& points);

}  // namespace finsler
