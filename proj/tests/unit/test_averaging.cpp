#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>

#include "finsler/averaging.hpp"
#include "finsler/errors.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix rot(double t) { return Eigen::Rotation2Dd(t).toRotationMatrix(); }

}  // namespace

TEST_CASE("Euclidean norm is a fixed point") {
  Matrix q(2, 2);
  q << 1, 0, 0, 4;
  const auto n = MinkowskiNorm::euclidean(q);
  const auto quad = sample_indicatrix(n, 256);
  CHECK(quad.points.size() == 256);
  CHECK((averaged_norm(n, quad).matrix - q).cwiseAbs().maxCoeff() <= 1e-9);
  // the indicatrix is the unit circle of q, so its q-length is 2 pi
  CHECK(quad.total_weight() == doctest::Approx(2 * std::numbers::pi).epsilon(1e-12));
  CHECK(oracle::ellipse_length_in_metric(q, 100000) == doctest::Approx(quad.total_weight()).epsilon(1e-8));
  for (const auto& y : quad.points) CHECK(n(y) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("averaged Randers norm matches the Simpson oracle") {
  // frozen from oracle::averaged_randers_2d (Simpson, 20000 intervals);
  // scipy adaptive quadrature agrees to 1e-12
  struct Case {
    double b0, q00, q11;
  };
  for (const Case c : {Case{0.3, 1.0381122915152825, 0.98259048566207485}, Case{0.5, 1.0986370371950542, 0.94852963124759115}}) {
    const auto n = MinkowskiNorm::randers(Matrix::Identity(2, 2), vec2(c.b0, 0));
    const Matrix q = averaged_norm(n, 1024).matrix;
    CHECK(q(0, 0) == doctest::Approx(c.q00).epsilon(1e-12));
    CHECK(q(1, 1) == doctest::Approx(c.q11).epsilon(1e-12));
    CHECK(std::abs(q(0, 1)) < 1e-13);
    const Matrix o = oracle::averaged_randers_2d(Matrix::Identity(2, 2), vec2(c.b0, 0), 4000);
    CHECK((o - q).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("refinement converges") {
  const auto n = MinkowskiNorm::randers(Matrix::Identity(2, 2), vec2(0.3, 0));
  double previous = 1.0;
  for (int r : {16, 32}) {
    const auto c = averaging_convergence(n, r);
    CHECK(c.difference < previous);
    previous = c.difference;
  }
  CHECK(averaging_convergence(n, 256).difference < 1e-13);
}

TEST_CASE("equivariance under linear maps and scaling") {
  const auto n1 = MinkowskiNorm::randers(Matrix::Identity(2, 2), vec2(0.3, 0));
  const Matrix l = rot(std::numbers::pi / 6);
  CHECK(verify_equivariance(n1, compose_linear(n1, l.inverse()), l, 1.0, 1024) <= 1e-12);
  CHECK(verify_equivariance(n1, compose_linear(n1, Matrix::Identity(2, 2), 0.5), Matrix::Identity(2, 2), 2.0, 1024) <= 1e-12);

  Matrix shear(2, 2);
  shear << 1, 0.4, 0, 1.5;
  const auto n2 = MinkowskiNorm::randers(Matrix::Identity(2, 2), vec2(0.1, 0.2));
  CHECK(verify_equivariance(compose_linear(n2, shear, 3.0), n2, shear, 3.0, 1024) <= 1e-9);
}

TEST_CASE("equivariance rejects unrelated norms") {
  const auto n1 = MinkowskiNorm::randers(Matrix::Identity(2, 2), vec2(0.3, 0));
  const auto n2 = MinkowskiNorm::randers(Matrix::Identity(2, 2), vec2(0.0, 0.3));
  CHECK_THROWS_AS(verify_equivariance(n1, n2, Matrix::Identity(2, 2), 1.0, 256), HypothesisViolated);
}

TEST_CASE("resolution bounds") {
  const auto n = MinkowskiNorm::euclidean(Matrix::Identity(2, 2));
  CHECK_THROWS(sample_indicatrix(n, 8));
  CHECK_THROWS(sample_indicatrix(MinkowskiNorm::euclidean(Matrix::Identity(3, 3)), 100));
}

TEST_CASE("one-dimensional indicatrix") {
  GenericParams p;
  p.value = [](const Vector& y) { return y(0) > 0 ? 2.0 * y(0) : -0.5 * y(0); };
  const auto quad = sample_indicatrix(MinkowskiNorm::generic(1, p), 16);
  REQUIRE(quad.points.size() == 2);
  CHECK(quad.points[0](0) * quad.points[1](0) < 0.0);
  CHECK(quad.total_weight() == doctest::Approx(2.0));
}

TEST_CASE("three dimensions") {
  const Matrix q = Vector((Vector(3) << 1, 2, 3).finished()).asDiagonal();
  const auto e = MinkowskiNorm::euclidean(q);
  const auto quad = sample_indicatrix(e, 4096);
  CHECK(quad.points.size() == 64 * 64);
  CHECK((averaged_norm(e, quad).matrix - q).cwiseAbs().maxCoeff() < 1e-12);
  // q-area of the q-unit sphere
  CHECK(quad.total_weight() == doctest::Approx(4 * std::numbers::pi).epsilon(1e-3));

  Vector b(3);
  b << 0.2, -0.1, 0.3;
  const Matrix r = averaged_norm(MinkowskiNorm::randers(Matrix::Identity(3, 3), b), 4096).matrix;
  CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(r).eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("quadrature table") {
  std::ostringstream out;
  write_quadrature_table(out, sample_indicatrix(MinkowskiNorm::euclidean(Matrix::Identity(2, 2)), 16));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "y0,y1,weight");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 16);
}
