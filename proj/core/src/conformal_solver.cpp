#include "finsler/conformal_solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

int numeric_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > tol * s(0)) ++r;
  }
  return r;
}

// Indices of candidate columns that raise the rank of the accepted set,
// in order. `prefix` columns are always accepted.
std::vector<int> greedy_independent(const Matrix& columns, int prefix, double tol) {
  std::vector<int> kept;
  Matrix acc(columns.rows(), 0);
  for (int c = 0; c < columns.cols(); ++c) {
    Matrix trial(columns.rows(), acc.cols() + 1);
    trial << acc, columns.col(c);
    if (c < prefix || numeric_rank(trial, tol) == trial.cols()) {
      kept.push_back(c);
      acc = std::move(trial);
    }
  }
  return kept;
}

Matrix stacked_values(const std::vector<VectorField>& fields, const std::vector<Point>& points, int dim) {
  Matrix m(static_cast<Eigen::Index>(points.size()) * dim, static_cast<Eigen::Index>(fields.size()));
  for (std::size_t a = 0; a < fields.size(); ++a) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      m.block(static_cast<Eigen::Index>(p) * dim, static_cast<Eigen::Index>(a), dim, 1) = fields[a](points[p]);
    }
  }
  return m;
}

std::string monomial_label(const std::array<int, 3>& powers) {
  std::ostringstream out;
  bool any = false;
  for (int i = 0; i < 3; ++i) {
    for (int e = 0; e < powers[static_cast<std::size_t>(i)]; ++e) {
      out << (any ? "*" : "") << 'X' << (i + 1);
      any = true;
    }
  }
  return any ? out.str() : "1";
}

std::vector<std::array<int, 3>> monomials_of_degree(int degree) {
  std::vector<std::array<int, 3>> out;
  for (int a = degree; a >= 0; --a) {
    for (int b = degree - a; b >= 0; --b) out.push_back({a, b, degree - a - b});
  }
  return out;
}

}  // namespace

FieldBasis::FieldBasis(ManifoldModel manifold, std::vector<VectorField> elements,
                       std::vector<ScalarField> rho_elements, int degree, std::string description)
    : manifold_(std::move(manifold)),
      elements_(std::move(elements)),
      rho_elements_(std::move(rho_elements)),
      degree_(degree),
      description_(std::move(description)) {
  if (elements_.empty()) throw ConfigError("field basis has no elements");
  for (const auto& e : elements_) {
    if (e.manifold().kind() != manifold_.kind()) throw ConfigError("basis element lives on another manifold");
  }
  for (const auto& r : rho_elements_) {
    if (r.manifold().kind() != manifold_.kind()) throw ConfigError("rho element lives on another manifold");
  }
}

FieldBasis FieldBasis::torus_fourier(const ManifoldModel& torus, int degree) {
  if (torus.kind() != ManifoldKind::FlatTorus) throw ConfigError("torus_fourier needs a flat torus");
  if (degree < 0) throw ConfigError("Fourier degree must be >= 0");
  std::vector<VectorField> fields;
  std::vector<ScalarField> rho;
  Eigen::VectorXi zero = Eigen::VectorXi::Zero(2);
  for (int d = 0; d < 2; ++d) fields.push_back(torus_fourier_field(torus, d, zero, false));
  rho.push_back(ScalarField::constant(torus, 1.0));
  for (int k1 = 0; k1 <= degree; ++k1) {
    for (int k2 = -degree; k2 <= degree; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      Eigen::VectorXi k(2);
      k << k1, k2;
      for (bool sine : {false, true}) {
        for (int d = 0; d < 2; ++d) fields.push_back(torus_fourier_field(torus, d, k, sine));
        FourierTerm t{k, sine ? 0.0 : 1.0, sine ? 1.0 : 0.0};
        rho.emplace_back(torus, FourierSeries(torus.lattice(), {t}));
      }
    }
  }
  std::ostringstream desc;
  desc << "Fourier modes |k|_inf <= " << degree;
  return FieldBasis(torus, std::move(fields), std::move(rho), degree, desc.str());
}

FieldBasis FieldBasis::sphere_conformal(const ManifoldModel& sphere, int degree) {
  if (sphere.kind() != ManifoldKind::Sphere2) throw ConfigError("sphere_conformal needs the sphere");
  if (degree < 0) throw ConfigError("polynomial degree must be >= 0");
  std::vector<VectorField> candidates;
  for (int a = 0; a < 3; ++a) candidates.push_back(sphere_rotation_field(sphere, a));
  for (int a = 0; a < 3; ++a) candidates.push_back(sphere_gradient_field(sphere, a));
  for (int deg = 1; deg <= degree; ++deg) {
    for (const auto& powers : monomials_of_degree(deg)) {
      for (int comp = 0; comp < 3; ++comp) {
        std::ostringstream label;
        label << monomial_label(powers) << " e" << (comp + 1);
        candidates.push_back(sphere_ambient_field(sphere, {AmbientTerm{comp, powers, 1.0}}, label.str()));
      }
    }
  }
  const std::vector<Point> probe = sample_points(sphere, 80, 0.13);
  const Matrix vals = stacked_values(candidates, probe, 2);
  std::vector<VectorField> fields;
  for (int idx : greedy_independent(vals, 6, 1e-8)) fields.push_back(candidates[static_cast<std::size_t>(idx)]);

  std::vector<ScalarField> rho_candidates;
  for (int deg = 0; deg <= std::max(degree, 1); ++deg) {
    for (const auto& powers : monomials_of_degree(deg)) {
      rho_candidates.emplace_back(sphere, SpherePolynomial{{MonomialTerm{powers, 1.0}}});
    }
  }
  Matrix rvals(static_cast<Eigen::Index>(probe.size()), static_cast<Eigen::Index>(rho_candidates.size()));
  for (std::size_t b = 0; b < rho_candidates.size(); ++b) {
    for (std::size_t p = 0; p < probe.size(); ++p) {
      rvals(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(b)) = rho_candidates[b].value(probe[p]);
    }
  }
  std::vector<ScalarField> rho;
  for (int idx : greedy_independent(rvals, 0, 1e-8)) rho.push_back(rho_candidates[static_cast<std::size_t>(idx)]);

  std::ostringstream desc;
  desc << "sphere conformal generators + projected ambient fields of degree <= " << degree;
  return FieldBasis(sphere, std::move(fields), std::move(rho), degree, desc.str());
}

int FieldBasis::numerical_rank(const std::vector<Point>& points, double tol) const {
  return numeric_rank(stacked_values(elements_, points, manifold_.dim()), tol);
}

VectorField FieldBasis::field(const Vector& coeffs, std::string label) const {
  return VectorField::combination(elements_, coeffs, std::move(label));
}

ScalarField FieldBasis::rho(const Vector& coeffs) const {
  if (coeffs.size() != rho_size() || rho_elements_.empty()) throw std::invalid_argument("rho: size mismatch");
  if (manifold_.kind() == ManifoldKind::Sphere2) {
    SpherePolynomial poly;
    for (int b = 0; b < rho_size(); ++b) {
      for (MonomialTerm t : std::get<SpherePolynomial>(rho_elements_[static_cast<std::size_t>(b)].data()).terms) {
        t.coeff *= coeffs(b);
        poly.terms.push_back(t);
      }
    }
    return ScalarField(manifold_, std::move(poly));
  }
  std::vector<FourierTerm> terms;
  Matrix lattice;
  for (int b = 0; b < rho_size(); ++b) {
    const auto& series = std::get<FourierSeries>(rho_elements_[static_cast<std::size_t>(b)].data());
    lattice = series.lattice();
    for (FourierTerm t : series.terms()) {
      t.cos_coeff *= coeffs(b);
      t.sin_coeff *= coeffs(b);
      terms.push_back(t);
    }
  }
  return ScalarField(manifold_, FourierSeries(lattice, std::move(terms)));
}

double FieldBasis::rho_value(const Vector& coeffs, const Point& x) const {
  double s = 0.0;
  for (int b = 0; b < rho_size(); ++b) s += coeffs(b) * rho_elements_[static_cast<std::size_t>(b)].value(x);
  return s;
}

std::vector<CollocationPair> make_collocation(const ManifoldModel& manifold, int grid, int directions,
                                              int random_directions, std::uint64_t seed, double offset,
                                              double angle_offset) {
  if (grid < 1 || directions < 0 || random_directions < 0 || directions + random_directions < 1) {
    throw ConfigError("collocation needs grid >= 1 and at least one direction");
  }
  const int dim = manifold.dim();
  const int count = manifold.kind() == ManifoldKind::Sphere2 ? grid * grid : grid;
  const std::vector<Point> points = sample_points(manifold, count, offset);

  std::vector<Vector> dirs;
  for (int k = 0; k < directions; ++k) {
    if (dim == 1) {
      dirs.push_back(Vector::Constant(1, k % 2 == 0 ? 1.0 : -1.0));
    } else {
      const double t = angle_offset + 2.0 * std::numbers::pi * k / directions;
      Vector y(2);
      y << std::cos(t), std::sin(t);
      dirs.push_back(y);
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < random_directions; ++k) {
    Vector y(dim);
    do {
      for (int i = 0; i < dim; ++i) y(i) = normal(rng);
    } while (y.norm() < 1e-3);
    dirs.push_back(y.normalized());
  }

  std::vector<CollocationPair> out;
  out.reserve(points.size() * dirs.size());
  for (const auto& p : points) {
    for (const auto& y : dirs) out.push_back(CollocationPair{p, y});
  }
  return out;
}

Matrix assemble_system(const FinslerField& field, const FieldBasis& basis,
                       const std::vector<CollocationPair>& collocation, SolveMode mode) {
  const int m = basis.size();
  const int r = mode == SolveMode::Conformal ? basis.rho_size() : 0;
  const auto rows = static_cast<Eigen::Index>(collocation.size());
  if (rows < 3 * static_cast<Eigen::Index>(m + r)) {
    std::ostringstream msg;
    msg << "collocation gives " << rows << " rows for " << (m + r) << " unknowns (need >= 3x)";
    throw UnderdeterminedSystem(msg.str());
  }
  Matrix a(rows, m + r);
  // Rows are independent, so contiguous chunks fill in parallel without
  // changing any entry.
  auto fill = [&](Eigen::Index begin, Eigen::Index end) {
    std::vector<FieldValue> cache(static_cast<std::size_t>(m));
    Vector rho_vals(r);
    const Point* cached = nullptr;
    for (Eigen::Index row = begin; row < end; ++row) {
      const CollocationPair& pair = collocation[static_cast<std::size_t>(row)];
      if (cached == nullptr || cached->chart != pair.x.chart || cached->coords != pair.x.coords) {
        for (int b = 0; b < m; ++b) {
          cache[static_cast<std::size_t>(b)] = basis.elements()[static_cast<std::size_t>(b)].evaluate(pair.x);
        }
        for (int b = 0; b < r; ++b) rho_vals(b) = basis.rho_elements()[static_cast<std::size_t>(b)].value(pair.x);
        cached = &pair.x;
      }
      const double f = field(pair.x, pair.y);
      if (!(f > 0.0)) throw DegenerateInput("collocation direction with F = 0");
      const Vector gx = field.grad_x(pair.x, pair.y);
      const Vector gy = field.grad_y(pair.x, pair.y);
      for (int b = 0; b < m; ++b) {
        const FieldValue& v = cache[static_cast<std::size_t>(b)];
        a(row, b) = (v.value.dot(gx) + (v.jacobian * pair.y).dot(gy)) / f;
      }
      if (r > 0) a.row(row).tail(r) = -rho_vals.transpose();
    }
  };
  const Eigen::Index workers =
      std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::thread::hardware_concurrency()), 1, rows / 512 + 1);
  if (workers <= 1) {
    fill(0, rows);
  } else {
    std::vector<std::future<void>> jobs;
    const Eigen::Index chunk = (rows + workers - 1) / workers;
    for (Eigen::Index begin = 0; begin < rows; begin += chunk) {
      jobs.push_back(std::async(std::launch::async, fill, begin, std::min(rows, begin + chunk)));
    }
    for (auto& j : jobs) j.get();
  }
  return a;
}

NullSpace null_space(const Matrix& a, double tol_ratio) {
  NullSpace out;
  const Eigen::Index cols = a.cols();
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const Vector& s = out.singular_values;
  const double smax = s.size() > 0 ? s(0) : 0.0;
  out.threshold = tol_ratio * smax;
  Eigen::Index rank = 0;
  if (smax > 0.0) {
    while (rank < s.size() && s(rank) >= out.threshold) ++rank;
  }
  out.dimension = static_cast<int>(cols - rank);
  out.basis = svd.matrixV().rightCols(cols - rank);
  const double inf = std::numeric_limits<double>::infinity();
  if (rank == 0) {
    out.gap = smax > 0.0 ? inf : 0.0;
  } else if (rank < s.size()) {
    out.gap = s(rank) > 0.0 ? s(rank - 1) / s(rank) : inf;
  } else {
    out.gap = inf;
  }
  return out;
}

namespace {

// (L_V F)/F at each pair, for the field with the given element coefficients.
Vector normalized_lie(const FinslerField& field, const FieldBasis& basis, const Vector& coeffs,
                      const std::vector<CollocationPair>& pairs) {
  const VectorField v = basis.field(coeffs);
  Vector out(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = lie_derivative(field, v, pairs[i].x, pairs[i].y) / field(pairs[i].x, pairs[i].y);
  }
  return out;
}

Matrix rho_matrix(const FieldBasis& basis, const std::vector<CollocationPair>& pairs) {
  Matrix phi(static_cast<Eigen::Index>(pairs.size()), basis.rho_size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (int b = 0; b < basis.rho_size(); ++b) {
      phi(static_cast<Eigen::Index>(i), b) = basis.rho_elements()[static_cast<std::size_t>(b)].value(pairs[i].x);
    }
  }
  return phi;
}

}  // namespace

SolveReport solve_fields(const FinslerField& field, const FieldBasis& basis, const SolverConfig& config) {
  if (field.manifold().kind() != basis.manifold().kind()) throw ConfigError("basis and metric live on different manifolds");
  if (!(config.tol_ratio > 0.0) || !(config.residual_tol > 0.0)) throw ConfigError("tolerances must be positive");

  const ManifoldModel& m = field.manifold();
  const bool sphere = m.kind() == ManifoldKind::Sphere2;
  const auto colloc = make_collocation(m, config.grid, config.directions, config.random_directions, config.seed);
  const double angle_shift = config.directions > 0 ? std::numbers::pi / config.directions : 0.3;
  const auto verify = make_collocation(m, config.grid, config.directions, config.random_directions, config.seed + 1,
                                       sphere ? 0.37 : 0.5, angle_shift);

  SolveReport rep;
  rep.tolerance_used = config.tol_ratio;
  rep.residual_tol = config.residual_tol;
  rep.rows = static_cast<int>(colloc.size());
  rep.unknowns_killing = basis.size();
  rep.unknowns_conformal = basis.size() + basis.rho_size();

  const NullSpace nk = null_space(assemble_system(field, basis, colloc, SolveMode::Killing), config.tol_ratio);
  rep.killing_dim = nk.dimension;
  rep.killing_basis = nk.basis;
  rep.singular_values_killing = nk.singular_values;
  rep.gap_killing = nk.gap;

  const NullSpace nc = null_space(assemble_system(field, basis, colloc, SolveMode::Conformal), config.tol_ratio);
  rep.singular_values_conformal = nc.singular_values;
  rep.gap_conformal = nc.gap;
  const int mfields = basis.size();
  if (nc.dimension > 0) {
    const Matrix proj = nc.basis.topRows(mfields);
    Eigen::JacobiSVD<Matrix> svd(proj, Eigen::ComputeThinU);
    int rank = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      if (svd.singularValues()(k) > 1e-6) ++rank;
    }
    rep.conformal_dim = rank;
    rep.conformal_basis = svd.matrixU().leftCols(rank);
    if (rank < nc.dimension) {
      rep.spurious_rho = true;
      rep.warnings.push_back("conformal null space contains vectors with vanishing field part");
    }
  } else {
    rep.conformal_basis = Matrix(mfields, 0);
  }

  // rho refit and verification.
  const Matrix phi = rho_matrix(basis, colloc);
  const Matrix phi_v = rho_matrix(basis, verify);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  if (basis.rho_size() > 0) cod.compute(phi);
  rep.conformal_factors = Matrix(basis.rho_size(), rep.conformal_dim);
  for (int j = 0; j < rep.conformal_dim; ++j) {
    const Vector c = rep.conformal_basis.col(j);
    const Vector l = normalized_lie(field, basis, c, colloc);
    Vector r = basis.rho_size() > 0 ? Vector(cod.solve(l)) : Vector();
    rep.conformal_factors.col(j) = r;
    rep.rho_fit_residuals.push_back(basis.rho_size() > 0 ? (phi * r - l).cwiseAbs().maxCoeff() : l.cwiseAbs().maxCoeff());
    rep.max_rho_norm = std::max(rep.max_rho_norm, r.size() > 0 ? r.norm() : 0.0);
    const Vector lv = normalized_lie(field, basis, c, verify);
    const double res = basis.rho_size() > 0 ? (lv - phi_v * r).cwiseAbs().maxCoeff() : lv.cwiseAbs().maxCoeff();
    rep.conformal_residuals.push_back(res);
  }
  for (int j = 0; j < rep.killing_dim; ++j) {
    const Vector lv = normalized_lie(field, basis, rep.killing_basis.col(j), verify);
    rep.killing_residuals.push_back(lv.cwiseAbs().maxCoeff());
  }
  for (double r : rep.killing_residuals) rep.max_residual = std::max(rep.max_residual, r);
  for (double r : rep.conformal_residuals) rep.max_residual = std::max(rep.max_residual, r);
  rep.verified = rep.max_residual <= 10.0 * config.residual_tol;
  if (!rep.verified) rep.warnings.push_back("basis fields fail the verification-grid residual bound");

  rep.ill_conditioned = rep.gap_killing < config.min_gap || rep.gap_conformal < config.min_gap;
  if (rep.ill_conditioned) rep.warnings.push_back("singular-value gap below the conditioning threshold");
  if (rep.killing_dim > rep.conformal_dim) rep.warnings.push_back("Killing dimension exceeds conformal dimension");
  return rep;
}

std::vector<VectorField> killing_fields(const SolveReport& report, const FieldBasis& basis) {
  std::vector<VectorField> out;
  for (int j = 0; j < report.killing_dim; ++j) {
    out.push_back(basis.field(report.killing_basis.col(j), "killing_" + std::to_string(j)));
  }
  return out;
}

std::vector<VectorField> conformal_fields(const SolveReport& report, const FieldBasis& basis) {
  std::vector<VectorField> out;
  for (int j = 0; j < report.conformal_dim; ++j) {
    out.push_back(basis.field(report.conformal_basis.col(j), "conformal_" + std::to_string(j)));
  }
  return out;
}

Vector bracket_value(const VectorField& v, const VectorField& w, const Point& x) {
  const FieldValue a = v.evaluate(x);
  const FieldValue b = w.evaluate(x);
  return b.jacobian * a.value - a.jacobian * b.value;
}

BracketExpansion lie_bracket_fields(const VectorField& v, const VectorField& w, const std::vector<VectorField>& span,
                                    const std::vector<Point>& points, double tol) {
  if (span.empty() || points.empty()) throw std::invalid_argument("lie_bracket_fields: empty span or point set");
  const int dim = v.manifold().dim();
  const Matrix a = stacked_values(span, points, dim);
  Vector target(a.rows());
  for (std::size_t p = 0; p < points.size(); ++p) {
    target.segment(static_cast<Eigen::Index>(p) * dim, dim) = bracket_value(v, w, points[p]);
  }
  const Vector c = a.completeOrthogonalDecomposition().solve(target);
  const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
  const double residual = (a * c - target).cwiseAbs().maxCoeff() / scale;
  if (residual > tol) {
    std::ostringstream msg;
    msg << "bracket [" << v.label() << ", " << w.label() << "] leaves the span (residual " << residual << ")";
    throw ClosureFailure(msg.str(), residual);
  }
  return BracketExpansion{c, residual, VectorField::combination(span, c, "[" + v.label() + ", " + w.label() + "]")};
}

StructureConstants extract_structure_constants(const std::vector<VectorField>& fields,
                                               const std::vector<Point>& points, double tol) {
  const int n = static_cast<int>(fields.size());
  std::vector<StructureEntry> entries;
  double closure = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const BracketExpansion e =
          lie_bracket_fields(fields[static_cast<std::size_t>(i)], fields[static_cast<std::size_t>(j)], fields, points, tol);
      closure = std::max(closure, e.residual);
      for (int k = 0; k < n; ++k) {
        if (std::abs(e.coefficients(k)) > 1e-12) entries.push_back(StructureEntry{i, j, k, e.coefficients(k)});
      }
    }
  }
  LieAlgebra alg = LieAlgebra::from_entries(n, entries);
  const double anti = alg.antisymmetry_residual();
  const double jac = alg.jacobi_residual();
  return StructureConstants{std::move(alg), closure, anti, jac};
}

std::vector<bool> transitivity_check(const std::vector<VectorField>& fields, const std::vector<Point>& points,
                                     double tol) {
  std::vector<bool> out;
  if (fields.empty()) return std::vector<bool>(points.size(), false);
  const int dim = fields.front().manifold().dim();
  for (const auto& p : points) {
    Matrix m(dim, static_cast<Eigen::Index>(fields.size()));
    for (std::size_t a = 0; a < fields.size(); ++a) m.col(static_cast<Eigen::Index>(a)) = fields[a](p);
    out.push_back(numeric_rank(m, tol) == dim);
  }
  return out;
}

double pushforward_residual(const std::vector<VectorField>& fields, const Diffeomorphism& f,
                            const std::vector<Point>& points) {
  if (fields.empty()) return 0.0;
  const int dim = fields.front().manifold().dim();
  std::vector<Point> images;
  std::vector<Matrix> diffs;
  for (const auto& p : points) {
    images.push_back(f(p));
    diffs.push_back(f.differential(p));
  }
  const Matrix a = stacked_values(fields, images, dim);
  const auto cod = a.completeOrthogonalDecomposition();
  double worst = 0.0;
  for (const auto& v : fields) {
    Vector t(a.rows());
    for (std::size_t p = 0; p < points.size(); ++p) {
      t.segment(static_cast<Eigen::Index>(p) * dim, dim) = diffs[p] * v(points[p]);
    }
    const double tn = t.norm();
    if (tn < 1e-300) continue;
    const Vector c = cod.solve(t);
    worst = std::max(worst, (a * c - t).norm() / tn);
  }
  return worst;
}

}  // namespace finsler
