#include "finsler/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;

// Orthonormal basis of the column span of m, counting singular values above
// `threshold`.
Matrix column_span(const Matrix& m, double threshold) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > threshold) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

Matrix null_basis(const Matrix& m, double threshold) {
  const auto n = m.cols();
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > threshold) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

double rank_threshold(const LieAlgebra& algebra, double tol) {
  return tol * std::max(1.0, algebra.scale());
}

double form_threshold(const LieAlgebra& algebra, double tol) {
  return tol * std::max(1.0, algebra.scale() * algebra.scale());
}

}  // namespace

LieAlgebra::LieAlgebra(std::vector<Matrix> ad_basis)
    : dim_(static_cast<int>(ad_basis.size())), ad_basis_(std::move(ad_basis)) {
  for (const Matrix& m : ad_basis_) {
    if (m.rows() != dim_ || m.cols() != dim_) throw InvalidAlgebra("structure constants have the wrong shape");
    if (!m.allFinite()) throw InvalidAlgebra("structure constants are not finite");
    if (dim_ > 0) scale_ = std::max(scale_, m.cwiseAbs().maxCoeff());
  }
  const double anti = antisymmetry_residual();
  if (anti > 1e-10 * std::max(1.0, scale_)) {
    std::ostringstream os;
    os << "structure constants are not antisymmetric (residual " << anti << ")";
    throw InvalidAlgebra(os.str());
  }
  const double jac = jacobi_residual();
  if (jac > 1e-8 * std::max(1.0, scale_ * scale_)) {
    std::ostringstream os;
    os << "structure constants violate the Jacobi identity (residual " << jac << ")";
    throw InvalidAlgebra(os.str());
  }
}

LieAlgebra LieAlgebra::from_entries(int dim, const std::vector<StructureEntry>& entries) {
  if (dim < 0) throw InvalidAlgebra("negative dimension");
  std::vector<Matrix> ad(static_cast<std::size_t>(dim), Matrix::Zero(dim, dim));
  std::vector<std::vector<bool>> given(static_cast<std::size_t>(dim), std::vector<bool>(static_cast<std::size_t>(dim) * dim, false));
  for (const auto& e : entries) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim || e.j >= dim || e.k >= dim) {
      throw InvalidAlgebra("structure entry index out of range");
    }
    ad[static_cast<std::size_t>(e.i)](e.k, e.j) = e.value;
    given[static_cast<std::size_t>(e.i)][static_cast<std::size_t>(e.j * dim + e.k)] = true;
  }
  for (const auto& e : entries) {
    if (!given[static_cast<std::size_t>(e.j)][static_cast<std::size_t>(e.i * dim + e.k)]) {
      ad[static_cast<std::size_t>(e.j)](e.k, e.i) = -e.value;
    }
  }
  return LieAlgebra(std::move(ad));
}

LieAlgebra LieAlgebra::abelian(int dim) {
  return LieAlgebra(std::vector<Matrix>(static_cast<std::size_t>(dim), Matrix::Zero(dim, dim)));
}

LieAlgebra LieAlgebra::rotation() {
  return from_entries(3, {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}});
}

LieAlgebra LieAlgebra::affine2() { return from_entries(2, {{0, 1, 1, 1.0}}); }

LieAlgebra LieAlgebra::heisenberg() { return from_entries(3, {{0, 1, 2, 1.0}}); }

LieAlgebra LieAlgebra::direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
  const int n = a.dim() + b.dim();
  std::vector<Matrix> ad;
  for (const Matrix& m : a.ad_basis()) {
    Matrix big = Matrix::Zero(n, n);
    big.topLeftCorner(a.dim(), a.dim()) = m;
    ad.push_back(big);
  }
  for (const Matrix& m : b.ad_basis()) {
    Matrix big = Matrix::Zero(n, n);
    big.bottomRightCorner(b.dim(), b.dim()) = m;
    ad.push_back(big);
  }
  return LieAlgebra(std::move(ad));
}

std::vector<StructureEntry> LieAlgebra::entries(double drop_below) const {
  std::vector<StructureEntry> out;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      for (int k = 0; k < dim_; ++k) {
        const double c = constant(i, j, k);
        if (c != 0.0 && std::abs(c) > drop_below) out.push_back({i, j, k, c});
      }
    }
  }
  return out;
}

Vector LieAlgebra::bracket(const Vector& u, const Vector& w) const {
  return ad_matrix(*this, u) * w;
}

double LieAlgebra::antisymmetry_residual() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      for (int k = 0; k < dim_; ++k) {
        worst = std::max(worst, std::abs(constant(i, j, k) + constant(j, i, k)));
      }
    }
  }
  return worst;
}

double LieAlgebra::jacobi_residual() const {
  // [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] = 0.
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      for (int k = 0; k < dim_; ++k) {
        const Vector r = ad_basis_[static_cast<std::size_t>(i)] * ad_basis_[static_cast<std::size_t>(j)].col(k) +
                         ad_basis_[static_cast<std::size_t>(j)] * ad_basis_[static_cast<std::size_t>(k)].col(i) +
                         ad_basis_[static_cast<std::size_t>(k)] * ad_basis_[static_cast<std::size_t>(i)].col(j);
        if (r.size() > 0) worst = std::max(worst, r.cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

Matrix ad_matrix(const LieAlgebra& algebra, const Vector& u) {
  const int n = algebra.dim();
  if (u.size() != n) throw std::invalid_argument("ad_matrix: coefficient vector has the wrong size");
  Matrix out = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (u(i) != 0.0) out += u(i) * algebra.ad_basis()[static_cast<std::size_t>(i)];
  }
  return out;
}

double killing_form(const LieAlgebra& algebra, const Vector& u, const Vector& w) {
  return (ad_matrix(algebra, u) * ad_matrix(algebra, w)).trace();
}

Matrix killing_gram(const LieAlgebra& algebra) {
  const int n = algebra.dim();
  Matrix b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = (algebra.ad_basis()[static_cast<std::size_t>(i)] *
                        algebra.ad_basis()[static_cast<std::size_t>(j)]).trace();
      b(i, j) = v;
      b(j, i) = v;
    }
  }
  return b;
}

Signature killing_signature(const LieAlgebra& algebra, double tol) {
  Signature s;
  if (algebra.dim() == 0) return s;
  Eigen::SelfAdjointEigenSolver<Matrix> es(killing_gram(algebra), Eigen::EigenvaluesOnly);
  const double eps = form_threshold(algebra, tol);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > eps) {
      ++s.positive;
    } else if (l < -eps) {
      ++s.negative;
    } else {
      ++s.zero;
    }
  }
  return s;
}

Matrix bracket_span(const LieAlgebra& algebra, const Matrix& subspace, double tol) {
  const auto k = subspace.cols();
  Matrix brackets(algebra.dim(), std::max<Eigen::Index>(k * (k - 1) / 2, 0));
  Eigen::Index col = 0;
  for (Eigen::Index a = 0; a < k; ++a) {
    const Matrix ada = ad_matrix(algebra, subspace.col(a));
    for (Eigen::Index b = a + 1; b < k; ++b) brackets.col(col++) = ada * subspace.col(b);
  }
  return column_span(brackets, rank_threshold(algebra, tol));
}

std::vector<int> derived_series(const LieAlgebra& algebra, const Matrix& subspace, double tol) {
  std::vector<int> dims;
  Matrix current = column_span(subspace, rank_threshold(algebra, tol));
  dims.push_back(static_cast<int>(current.cols()));
  while (current.cols() > 0) {
    Matrix next = bracket_span(algebra, current, tol);
    dims.push_back(static_cast<int>(next.cols()));
    if (next.cols() == current.cols()) break;
    current = std::move(next);
  }
  return dims;
}

std::vector<int> derived_series(const LieAlgebra& algebra, double tol) {
  return derived_series(algebra, Matrix::Identity(algebra.dim(), algebra.dim()), tol);
}

bool is_solvable(const LieAlgebra& algebra, double tol) {
  return derived_series(algebra, tol).back() == 0;
}

bool cartan_solvability(const LieAlgebra& algebra, double tol) {
  const int n = algebra.dim();
  const Matrix derived = bracket_span(algebra, Matrix::Identity(n, n), tol);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < derived.cols(); ++j) {
      worst = std::max(worst, std::abs(killing_form(algebra, Vector::Unit(n, i), derived.col(j))));
    }
  }
  return worst <= form_threshold(algebra, tol);
}

RadicalReport killing_radical(const LieAlgebra& algebra, double tol) {
  const int n = algebra.dim();
  RadicalReport out;
  const Matrix gram = killing_gram(algebra);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double eps = form_threshold(algebra, tol);
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i)) <= eps) kernel.push_back(i);
  }
  out.basis.resize(n, static_cast<Eigen::Index>(kernel.size()));
  for (std::size_t c = 0; c < kernel.size(); ++c) {
    out.basis.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(kernel[c]);
  }

  // Ideal check: [e_i, r] stays in span(r).
  const Matrix projector = out.basis * out.basis.transpose();
  for (int i = 0; i < n; ++i) {
    const Matrix image = algebra.ad_basis()[static_cast<std::size_t>(i)] * out.basis;
    if (image.size() == 0) continue;
    out.ideal_residual = std::max(out.ideal_residual, (image - projector * image).cwiseAbs().maxCoeff());
  }
  if (out.ideal_residual > rank_threshold(algebra, tol)) {
    std::ostringstream os;
    os << "Killing-form kernel is not an ideal (residual " << out.ideal_residual << ")";
    throw InvalidAlgebra(os.str());
  }
  out.solvable = derived_series(algebra, out.basis, tol).back() == 0;
  return out;
}

SemisimplicityReport ad_semisimplicity(const LieAlgebra& algebra, const Vector& u, double tol) {
  SemisimplicityReport out;
  const int n = algebra.dim();
  const Matrix ad = ad_matrix(algebra, u);
  if (n == 0) {
    out.semisimple = true;
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(ad);
  const double sigma_max = svd.singularValues()(0);
  if (sigma_max == 0.0) {
    out.semisimple = true;
    out.multiplicities = {n};
    return out;
  }
  const double radius = tol * sigma_max;

  Eigen::EigenSolver<Matrix> es(ad, false);
  const Eigen::VectorXcd eig = es.eigenvalues();

  // Single-linkage clustering of the spectrum.
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) label[static_cast<std::size_t>(i)] = i;
  auto find = [&](int i) {
    while (label[static_cast<std::size_t>(i)] != i) i = label[static_cast<std::size_t>(i)];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(eig(i) - eig(j)) <= radius) label[static_cast<std::size_t>(find(j))] = find(i);
    }
  }
  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
  }

  std::vector<std::complex<double>> centers;
  out.semisimple = true;
  for (int r : roots) {
    std::complex<double> mean = 0.0;
    int m = 0;
    for (int i = 0; i < n; ++i) {
      if (find(i) == r) {
        mean += eig(i);
        ++m;
      }
    }
    mean /= static_cast<double>(m);
    centers.push_back(mean);
    out.multiplicities.push_back(m);

    ComplexMatrix shifted = ad.cast<std::complex<double>>();
    shifted.diagonal().array() -= mean;
    Eigen::JacobiSVD<ComplexMatrix> csvd(shifted);
    int small = 0;
    for (Eigen::Index i = 0; i < csvd.singularValues().size(); ++i) {
      if (csvd.singularValues()(i) <= radius) ++small;
    }
    if (small != m) out.semisimple = false;
  }
  for (std::size_t a = 0; a < centers.size(); ++a) {
    for (std::size_t b = a + 1; b < centers.size(); ++b) {
      if (std::abs(centers[a] - centers[b]) <= 10.0 * radius) out.ambiguous = true;
    }
  }
  return out;
}

bool ad_semisimple(const LieAlgebra& algebra, const Vector& u, double tol) {
  return ad_semisimplicity(algebra, u, tol).semisimple;
}

bool ad_nilpotent(const LieAlgebra& algebra, const Vector& u, double tol) {
  const Matrix ad = ad_matrix(algebra, u);
  const double norm = ad.norm();
  if (norm == 0.0) return true;
  Matrix power = Matrix::Identity(ad.rows(), ad.cols());
  for (Eigen::Index i = 0; i < ad.rows(); ++i) power = power * ad;
  return power.norm() <= tol * std::pow(norm, static_cast<double>(ad.rows()));
}

Matrix center(const LieAlgebra& algebra, double tol) {
  const int n = algebra.dim();
  // Column i is vec(ad(e_i)); ad(U) = sum U_i ad(e_i).
  Matrix stacked(n * n, n);
  for (int i = 0; i < n; ++i) {
    stacked.col(i) = algebra.ad_basis()[static_cast<std::size_t>(i)].reshaped();
  }
  return null_basis(stacked, rank_threshold(algebra, tol));
}

CompactDecompositionReport compact_decomposition_check(const LieAlgebra& algebra, double tol) {
  CompactDecompositionReport out;
  const int n = algebra.dim();
  const Signature sig = killing_signature(algebra, tol);
  out.compact_type = sig.positive == 0;
  const Matrix derived = bracket_span(algebra, Matrix::Identity(n, n), tol);
  const Matrix cent = center(algebra, tol);
  out.derived_dim = static_cast<int>(derived.cols());
  out.center_dim = static_cast<int>(cent.cols());
  out.kernel_dim = sig.zero;
  if (!out.compact_type) {
    out.note = "not compact type: the Killing form has positive directions";
    return out;
  }
  const Matrix kernel = killing_radical(algebra, tol).basis;
  out.kernel_dim = static_cast<int>(kernel.cols());

  Matrix joined(n, cent.cols() + kernel.cols());
  joined << cent, kernel;
  out.kernel_is_center = out.kernel_dim == out.center_dim &&
                         column_span(joined, rank_threshold(algebra, tol)).cols() == out.center_dim;

  Matrix sum(n, derived.cols() + cent.cols());
  sum << derived, cent;
  out.direct_sum = out.derived_dim + out.center_dim == n &&
                   column_span(sum, rank_threshold(algebra, tol)).cols() == n;
  out.note = out.direct_sum && out.kernel_is_center ? "g = [g,g] (+) center confirmed"
                                                    : "decomposition check failed";
  return out;
}

}  // namespace finsler
