#pragma once

#include <string>
#include <vector>

#include "finsler/types.hpp"

namespace finsler {

/// One structure constant: [e_i, e_j] has coefficient `value` on e_k.
struct StructureEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  double value = 0.0;
};

/// Finite-dimensional real Lie algebra given by structure constants
/// [e_i, e_j] = c^k_ij e_k. Immutable; construction validates antisymmetry
/// and the Jacobi identity (relative to the size of the constants) and
/// throws InvalidAlgebra on failure.
class LieAlgebra {
 public:
  /// ad_basis[i](k, j) = c^k_ij, i.e. ad(e_i) as a matrix.
  explicit LieAlgebra(std::vector<Matrix> ad_basis);

  /// Missing antisymmetric partners (j, i) are filled in.
  static LieAlgebra from_entries(int dim, const std::vector<StructureEntry>& entries);

  static LieAlgebra abelian(int dim);
  /// [e1, e2] = e3 and cyclic.
  static LieAlgebra rotation();
  /// [x, y] = y.
  static LieAlgebra affine2();
  /// [x, y] = z, z central.
  static LieAlgebra heisenberg();
  static LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);

  int dim() const noexcept { return dim_; }
  double constant(int i, int j, int k) const { return ad_basis_[static_cast<std::size_t>(i)](k, j); }
  const std::vector<Matrix>& ad_basis() const noexcept { return ad_basis_; }
  std::vector<StructureEntry> entries(double drop_below = 0.0) const;

  /// Largest |c^k_ij|; the scale every tolerance is measured against.
  double scale() const noexcept { return scale_; }

  Vector bracket(const Vector& u, const Vector& w) const;

  double antisymmetry_residual() const;
  double jacobi_residual() const;

 private:
  int dim_;
  std::vector<Matrix> ad_basis_;
  double scale_ = 0.0;
};

Matrix ad_matrix(const LieAlgebra& algebra, const Vector& u);

/// B(U, W) = tr(ad U ad W).
double killing_form(const LieAlgebra& algebra, const Vector& u, const Vector& w);
Matrix killing_gram(const LieAlgebra& algebra);

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

/// Inertia of the Killing Gram matrix with eigenvalues below
/// tol * max(1, scale^2) counted as zero.
Signature killing_signature(const LieAlgebra& algebra, double tol = 1e-8);

/// Orthonormal basis (columns) of span{[a, b] : a, b in span(subspace)}.
Matrix bracket_span(const LieAlgebra& algebra, const Matrix& subspace, double tol = 1e-8);

/// Dimensions of g, [g,g], [[g,g],[g,g]], ... until the series stabilizes
/// (e.g. {2, 1, 0} or {3, 3}).
std::vector<int> derived_series(const LieAlgebra& algebra, double tol = 1e-8);
/// Same series for the subalgebra spanned by the columns of `subspace`.
std::vector<int> derived_series(const LieAlgebra& algebra, const Matrix& subspace, double tol = 1e-8);
bool is_solvable(const LieAlgebra& algebra, double tol = 1e-8);

/// B(g, [g,g]) = 0, measured against tol * max(1, scale^2).
bool cartan_solvability(const LieAlgebra& algebra, double tol = 1e-8);

struct RadicalReport {
  Matrix basis;  // orthonormal columns spanning {U : B(U, g) = 0}
  double ideal_residual = 0.0;
  bool solvable = false;
};

/// Kernel of the Killing form. Throws InvalidAlgebra when the kernel fails
/// the ideal check (numerically broken constants).
RadicalReport killing_radical(const LieAlgebra& algebra, double tol = 1e-8);

struct SemisimplicityReport {
  bool semisimple = false;
  /// Two eigenvalue clusters closer than 10x the clustering radius.
  bool ambiguous = false;
  std::vector<int> multiplicities;
};

/// ad(U) diagonalizable over C: for every eigenvalue cluster (radius
/// tol * sigma_max) of multiplicity m, rank(ad U - lambda) = n - m.
SemisimplicityReport ad_semisimplicity(const LieAlgebra& algebra, const Vector& u, double tol = 1e-6);
bool ad_semisimple(const LieAlgebra& algebra, const Vector& u, double tol = 1e-6);

/// |ad(U)^n| <= tol * |ad(U)|^n (Frobenius), or ad(U) = 0.
bool ad_nilpotent(const LieAlgebra& algebra, const Vector& u, double tol = 1e-8);

/// Orthonormal basis of the center {U : ad(U) = 0}.
Matrix center(const LieAlgebra& algebra, double tol = 1e-8);

struct CompactDecompositionReport {
  bool compact_type = false;  // Killing form negative semidefinite
  int derived_dim = 0;
  int center_dim = 0;
  int kernel_dim = 0;
  bool kernel_is_center = false;
  bool direct_sum = false;  // g = [g,g] (+) center
  std::string note;
};

CompactDecompositionReport compact_decomposition_check(const LieAlgebra& algebra, double tol = 1e-8);

}  // namespace finsler
