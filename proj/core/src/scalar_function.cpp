#include <cmath>
#include <numbers>
#include <stdexcept>

#include "finsler/errors.hpp"
#include "finsler/manifold.hpp"
#include "sphere_charts.hpp"

namespace finsler {

FourierSeries::FourierSeries(Matrix lattice, std::vector<FourierTerm> terms)
    : lattice_(std::move(lattice)), terms_(std::move(terms)) {
  if (lattice_.rows() != lattice_.cols() || lattice_.rows() < 1) {
    throw std::invalid_argument("FourierSeries: lattice must be square");
  }
  if (std::abs(lattice_.determinant()) < 1e-14) {
    throw std::invalid_argument("FourierSeries: degenerate lattice");
  }
  dual_ = lattice_.inverse().transpose();
  for (const auto& t : terms_) {
    if (t.mode.size() != lattice_.rows()) {
      throw std::invalid_argument("FourierSeries: mode has the wrong dimension");
    }
  }
}

FourierSeries FourierSeries::constant(Matrix lattice, double c) {
  const auto n = lattice.rows();
  return FourierSeries(std::move(lattice), {FourierTerm{Eigen::VectorXi::Zero(n), c, 0.0}});
}

double FourierSeries::value(const Vector& x) const {
  double out = 0.0;
  for (const auto& t : terms_) {
    const double phase = 2.0 * std::numbers::pi * (dual_ * t.mode.cast<double>()).dot(x);
    out += t.cos_coeff * std::cos(phase) + t.sin_coeff * std::sin(phase);
  }
  return out;
}

Vector FourierSeries::gradient(const Vector& x) const {
  Vector out = Vector::Zero(dim());
  for (const auto& t : terms_) {
    const Vector wave = 2.0 * std::numbers::pi * (dual_ * t.mode.cast<double>());
    const double phase = wave.dot(x);
    out += (-t.cos_coeff * std::sin(phase) + t.sin_coeff * std::cos(phase)) * wave;
  }
  return out;
}

namespace {

Matrix period_matrix(const ManifoldModel& m) {
  if (m.kind() == ManifoldKind::Circle) return Matrix::Constant(1, 1, m.length());
  return m.lattice();
}

}  // namespace

ScalarField::ScalarField(ManifoldModel manifold, FourierSeries series)
    : manifold_(std::move(manifold)), data_(std::move(series)) {
  if (manifold_.kind() == ManifoldKind::Sphere2) {
    throw std::invalid_argument("ScalarField: Fourier data needs a circle or torus");
  }
  const auto& s = std::get<FourierSeries>(data_);
  if (s.dim() != manifold_.dim() || !s.lattice().isApprox(period_matrix(manifold_))) {
    throw std::invalid_argument("ScalarField: Fourier lattice does not match the manifold");
  }
}

ScalarField::ScalarField(ManifoldModel manifold, SpherePolynomial poly)
    : manifold_(std::move(manifold)), data_(std::move(poly)) {
  if (manifold_.kind() != ManifoldKind::Sphere2) {
    throw std::invalid_argument("ScalarField: polynomial data needs the sphere");
  }
}

ScalarField ScalarField::constant(const ManifoldModel& manifold, double c) {
  if (manifold.kind() == ManifoldKind::Sphere2) {
    return ScalarField(manifold, SpherePolynomial{{MonomialTerm{{0, 0, 0}, c}}});
  }
  return ScalarField(manifold, FourierSeries::constant(period_matrix(manifold), c));
}

double ScalarField::value(const Point& p) const {
  manifold_.check_point(p);
  if (const auto* s = std::get_if<FourierSeries>(&data_)) return s->value(p.coords);
  const auto& poly = std::get<SpherePolynomial>(data_);
  const auto x = detail::chart_to_ambient(p.chart, p.coords(0), p.coords(1));
  double out = 0.0;
  for (const auto& t : poly.terms) out += t.coeff * detail::monomial(x, t.powers);
  return out;
}

Vector ScalarField::gradient(const Point& p) const {
  manifold_.check_point(p);
  if (const auto* s = std::get_if<FourierSeries>(&data_)) return s->gradient(p.coords);
  const auto& poly = std::get<SpherePolynomial>(data_);
  const auto u = detail::seed(p.coords);
  const auto x = detail::chart_to_ambient(p.chart, u[0], u[1]);
  detail::Ad2 out(0.0, Eigen::Vector2d::Zero());
  for (const auto& t : poly.terms) out += t.coeff * detail::monomial(x, t.powers);
  return Vector(out.derivatives());
}

}  // namespace finsler
