#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "finsler/errors.hpp"
#include "finsler/finsler_field.hpp"
#include "finsler/manifold.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {

// Central-difference Jacobian of a chart-local map.
Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, double h = 1e-6) {
  const Vector f0 = f(x);
  Matrix j(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector e = Vector::Zero(x.size());
    e(i) = h;
    j.col(i) = (f(x + e) - f(x - e)) / (2 * h);
  }
  return j;
}

std::vector<Point> sphere_probe() {
  return {make_point({0.3, -0.2}, 0), make_point({0.9, 0.7}, 0), make_point({-0.4, 1.1}, 1),
          make_point({0.05, 0.02}, 1), make_point({1.5, -0.3}, 0)};
}

}  // namespace

TEST_CASE("sphere charts") {
  const auto s = ManifoldModel::sphere2(2.0);
  CHECK(s.transition_residual(200) <= 1e-10);
  const Point p = make_point({0.6, -0.8}, 0);
  const Point q = s.to_chart(p, 1);
  CHECK((q.coords - p.coords / p.coords.squaredNorm()).norm() < 1e-15);
  CHECK((s.to_chart(q, 0).coords - p.coords).norm() < 1e-15);
  CHECK(s.canonical(make_point({1.8, 0}, 0)).chart == 1);
  CHECK(s.canonical(make_point({0.5, 0}, 0)).chart == 0);

  const Matrix fd = fd_jacobian([&](const Vector& u) { return s.to_chart(Point{0, u}, 1).coords; }, p.coords);
  CHECK((s.transition_jacobian(p, 1) - fd).cwiseAbs().maxCoeff() < 1e-8);

  // chart 0 places the south pole at u = 0
  CHECK((s.ambient(make_point({0, 0}, 0)) - Eigen::Vector3d(0, 0, -1)).norm() < 1e-15);
  CHECK((s.ambient(make_point({0.3, 0.4}, 0)) - oracle::sphere_from_chart0((Vector(2) << 0.3, 0.4).finished())).norm() < 1e-15);

  CHECK_THROWS_AS(s.check_point(make_point({2.0, 0}, 0)), ChartDomainError);
  CHECK_THROWS_AS(s.check_point(make_point({0.1, 0}, 2)), ChartDomainError);
  CHECK_THROWS_AS(s.check_point(make_point({0.1, 0, 0}, 0)), ChartDomainError);
  CHECK_THROWS_AS(s.check_point(make_point({NAN, 0}, 0)), ChartDomainError);
}

TEST_CASE("flat models") {
  Matrix lat(2, 2);
  lat << 1, 0.5, 0, 2;
  const auto t = ManifoldModel::flat_torus(lat);
  const Point p = t.canonical(make_point({1.7, -0.4}));
  const Vector s = lat.inverse() * p.coords;
  CHECK(s.minCoeff() >= 0.0);
  CHECK(s.maxCoeff() < 1.0);
  const Vector diff = lat.inverse() * (p.coords - make_point({1.7, -0.4}).coords);
  CHECK((diff - diff.array().round().matrix()).norm() < 1e-14);
  CHECK_THROWS(ManifoldModel::flat_torus(Matrix::Zero(2, 2)));
  CHECK_THROWS(ManifoldModel::circle(-1.0));
  CHECK_THROWS(ManifoldModel::sphere2(0.0));
  CHECK(ManifoldModel::circle(3.0).canonical(make_point({7.5})).coords(0) == doctest::Approx(1.5));
}

TEST_CASE("Fourier series") {
  Matrix lat(2, 2);
  lat << 1, 0.3, 0, 1.2;
  Eigen::VectorXi k(2);
  k << 1, -2;
  const FourierSeries f(lat, {FourierTerm{Eigen::VectorXi::Zero(2), 2.0, 0.0}, FourierTerm{k, 0.7, -0.4}});
  const Vector x = (Vector(2) << 0.31, 0.77).finished();
  const Matrix fd = fd_jacobian([&](const Vector& v) { return Vector::Constant(1, f.value(v)); }, x);
  CHECK((f.gradient(x).transpose() - fd).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(f.value(x + lat.col(0)) == doctest::Approx(f.value(x)).epsilon(1e-13));
  CHECK(f.value(x - 3 * lat.col(1)) == doctest::Approx(f.value(x)).epsilon(1e-13));
}

TEST_CASE("sphere scalar field gradient in both charts") {
  const auto s = ManifoldModel::sphere2();
  const ScalarField f(s, SpherePolynomial{{MonomialTerm{{1, 0, 1}, 1.5}, MonomialTerm{{0, 2, 0}, -0.5}, MonomialTerm{{0, 0, 0}, 3.0}}});
  for (const Point& p : sphere_probe()) {
    const Matrix fd = fd_jacobian([&](const Vector& u) { return Vector::Constant(1, f.value(Point{p.chart, u})); }, p.coords);
    CHECK((f.gradient(p).transpose() - fd).cwiseAbs().maxCoeff() < 1e-8);
    const Eigen::Vector3d x = s.ambient(p);
    CHECK(f.value(p) == doctest::Approx(1.5 * x(0) * x(2) - 0.5 * x(1) * x(1) + 3.0).epsilon(1e-13));
  }
}

TEST_CASE("vector field Jacobians and chart compatibility") {
  const auto s = ManifoldModel::sphere2();
  std::vector<VectorField> fields;
  for (int a = 0; a < 3; ++a) {
    fields.push_back(sphere_rotation_field(s, a));
    fields.push_back(sphere_gradient_field(s, a));
  }
  fields.push_back(sphere_ambient_field(s, {AmbientTerm{0, {1, 1, 0}, 1.0}, AmbientTerm{2, {0, 0, 2}, -2.0}}));
  fields.push_back(sphere_mobius_translation_field(s, 0.7));
  for (const auto& v : fields) {
    for (const Point& p : sphere_probe()) {
      const FieldValue fv = v.evaluate(p);
      const Matrix fd = fd_jacobian([&](const Vector& u) { return v(Point{p.chart, u}); }, p.coords);
      CHECK((fv.jacobian - fd).cwiseAbs().maxCoeff() < 1e-7);
      if (p.coords.norm() < 0.5) continue;  // other chart only on the overlap
      const int other = 1 - p.chart;
      const Vector moved = v(s.to_chart(p, other));
      CHECK((moved - s.transition_jacobian(p, other) * fv.value).norm() < 1e-12 * std::max(1.0, moved.norm()));
    }
  }
}

TEST_CASE("rotation about the polar axis is i z in chart 0") {
  const auto s = ManifoldModel::sphere2();
  const Point p = make_point({0.4, -0.3}, 0);
  CHECK((sphere_rotation_field(s, 2)(p) - (Vector(2) << 0.3, 0.4).finished()).norm() < 1e-15);
  CHECK((sphere_mobius_translation_field(s, 0.7)(p) - (Vector(2) << 0.7, 0.0).finished()).norm() < 1e-14);
}

TEST_CASE("torus fields") {
  const auto t = ManifoldModel::flat_torus();
  Eigen::VectorXi k(2);
  k << 2, 1;
  const VectorField v = torus_fourier_field(t, 1, k, true);
  const Point p = make_point({0.13, 0.58});
  const FieldValue fv = v.evaluate(p);
  CHECK(fv.value(0) == 0.0);
  CHECK(fv.value(1) == doctest::Approx(std::sin(2 * std::numbers::pi * (2 * 0.13 + 0.58))).epsilon(1e-14));
  const Matrix fd = fd_jacobian([&](const Vector& x) { return v(Point{0, x}); }, p.coords);
  CHECK((fv.jacobian - fd).cwiseAbs().maxCoeff() < 1e-7);

  const VectorField c = VectorField::combination({v, torus_constant_field(t, Vector::Ones(2))}, (Vector(2) << 2, -1).finished());
  CHECK((c(p) - (2 * fv.value - Vector::Ones(2))).norm() < 1e-15);
}

TEST_CASE("diffeomorphism differentials") {
  const auto s = ManifoldModel::sphere2();
  const std::vector<Diffeomorphism> maps = {
      Diffeomorphism::sphere_rotation(s, Eigen::Vector3d(1, 2, -0.5).normalized(), 0.8),
      Diffeomorphism::sphere_mobius(s, {2, 0}, {0, 0}, {0, 0}, {1, 0}),
      Diffeomorphism::sphere_mobius(s, {1, 0}, {0.3, 0}, {0, 0}, {1, 0}),
      Diffeomorphism::sphere_mobius(s, {1, 0.5}, {0.2, -0.1}, {0.3, 0}, {1, 0}),
  };
  for (const auto& f : maps) {
    for (const Point& p : sphere_probe()) {
      const Point fp = f(p);
      const Matrix fd = fd_jacobian(
          [&](const Vector& u) { return s.to_chart(f(Point{p.chart, u}), fp.chart).coords; }, p.coords);
      CHECK((f.differential(p) - fd).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
    }
  }
  // z -> 2z fixes the south pole and doubles chart-0 coordinates
  const Point o = maps[1](make_point({0.1, 0.2}, 0));
  CHECK((s.to_chart(o, 0).coords - (Vector(2) << 0.2, 0.4).finished()).norm() < 1e-14);

  const auto t = ManifoldModel::flat_torus();
  const auto tr = Diffeomorphism::torus_translation(t, (Vector(2) << 0.7, 0.6).finished());
  const Point q = tr(make_point({0.5, 0.5}));
  CHECK((q.coords - (Vector(2) << 0.2, 0.1).finished()).norm() < 1e-14);
  CHECK((tr.differential(q) - Matrix::Identity(2, 2)).norm() == 0.0);
}
