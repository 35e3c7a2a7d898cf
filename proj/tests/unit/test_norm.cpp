#include <doctest.h>

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/norm.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix diag(std::initializer_list<double> v) { return vec(v).asDiagonal(); }

// (y1^4 + y2^4)^(1/4): positive and homogeneous, but g_y is singular on the axes.
MinkowskiNorm quartic() {
  GenericParams p;
  p.value = [](const Vector& y) { return std::pow(std::pow(y(0), 4) + std::pow(y(1), 4), 0.25); };
  p.label = "l4";
  return MinkowskiNorm::generic(2, p);
}

}  // namespace

TEST_CASE("norm values") {
  CHECK(MinkowskiNorm::euclidean(Matrix::Identity(2, 2))(vec({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
  const auto r = MinkowskiNorm::randers(Matrix::Identity(2, 2), vec({0.5, 0}));
  CHECK(r(vec({1, 0})) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(r(vec({-1, 0})) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r(Vector::Zero(2)) == 0.0);
  CHECK(MinkowskiNorm::euclidean(diag({1, 4}))(Vector::Zero(2)) == 0.0);
}

TEST_CASE("construction rejects inadmissible parameters") {
  CHECK_THROWS_AS(MinkowskiNorm::randers(Matrix::Identity(2, 2), vec({1.0, 0})), InvalidNorm);
  CHECK_THROWS_AS(MinkowskiNorm::randers(diag({4, 1}), vec({2.1, 0})), InvalidNorm);
  CHECK_NOTHROW(MinkowskiNorm::randers(diag({4, 1}), vec({1.9, 0})));
  CHECK_THROWS_AS(MinkowskiNorm::euclidean(diag({1, -1})), InvalidNorm);
  Matrix asym(2, 2);
  asym << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(MinkowskiNorm::euclidean(asym), InvalidNorm);
  CHECK_THROWS_AS(MinkowskiNorm::randers(Matrix::Identity(2, 2), vec({0.1, 0.1, 0.1})), InvalidNorm);
}

TEST_CASE("Euclidean tensor is Q at every y") {
  const Matrix q = diag({1, 4});
  const auto n = MinkowskiNorm::euclidean(q);
  for (const Vector& y : {vec({1, 0}), vec({0.3, -2}), vec({-5, 7})}) {
    CHECK((fundamental_tensor(n, y).matrix - q).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("Randers tensor against the textbook formula and a 4th-order FD Hessian") {
  const Matrix a = diag({2, 1});
  const Vector b = vec({0.2, -0.1});
  const Vector y = vec({1, 2});
  const auto n = MinkowskiNorm::randers(a, b);

  // frozen from oracle::randers_tensor; the FD oracle agrees to 6e-10
  const double g00 = 2.3665986323710904, g01 = 0.061649658092772675, g11 = 0.84670068381445485;
  const Matrix g = fundamental_tensor(n, y).matrix;
  CHECK(g(0, 0) == doctest::Approx(g00).epsilon(1e-13));
  CHECK(g(0, 1) == doctest::Approx(g01).epsilon(1e-13));
  CHECK(g(1, 0) == doctest::Approx(g01).epsilon(1e-13));
  CHECK(g(1, 1) == doctest::Approx(g11).epsilon(1e-13));
  CHECK((oracle::randers_tensor(a, b, y) - g).cwiseAbs().maxCoeff() < 1e-14);

  const Matrix fd = oracle::half_square_hessian([&](const Vector& v) { return oracle::randers(a, b, v); }, y, 1e-3);
  CHECK((fd - g).cwiseAbs().maxCoeff() < 1e-8);

  TensorOptions opt;
  opt.scheme = DiffScheme::FiniteDifference;
  CHECK((fundamental_tensor(n, y, opt).matrix - g).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("tensor identities") {
  const auto n = MinkowskiNorm::randers(diag({3, 1}), vec({0.4, 0.2}));
  for (const Vector& y : {vec({1, 0}), vec({-0.2, 1.3}), vec({2, -2})}) {
    const auto g = fundamental_tensor(n, y);
    CHECK((g.matrix - g.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(g(y, y) == doctest::Approx(n(y) * n(y)).epsilon(1e-12));
    CHECK((fundamental_tensor(n, 3.7 * y).matrix - g.matrix).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g.matrix);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("tensor errors") {
  const auto n = MinkowskiNorm::randers(Matrix::Identity(2, 2), vec({0.5, 0}));
  CHECK_THROWS_AS(fundamental_tensor(n, Vector::Zero(2)), DegenerateInput);
  CHECK_THROWS_AS(fundamental_tensor(n, vec({1e-10, 0})), DegenerateInput);
  CHECK_NOTHROW(fundamental_tensor(n, vec({1e-6, 0})));

  try {
    fundamental_tensor(quartic(), vec({1, 0}));
    FAIL("expected a convexity violation");
  } catch (const ConvexityViolation& e) {
    CHECK(std::abs(e.eigenvalue()) < 1e-3);
  }
}

TEST_CASE("axiom checks") {
  const auto good = check_axioms(MinkowskiNorm::randers(diag({2, 1}), vec({0.3, 0.4})), 64, 7);
  CHECK(good.passed);
  CHECK(good.samples == 64);
  CHECK(good.min_value > 0.0);
  CHECK(good.max_homogeneity_residual < 1e-12);

  const auto bad = check_axioms(quartic(), 32, 7);
  CHECK_FALSE(bad.passed);
  CHECK(bad.positive);
  CHECK(bad.homogeneous);
  CHECK_FALSE(bad.strongly_convex);
  CHECK_FALSE(bad.failures.empty());
}

TEST_CASE("reversibility") {
  CHECK(reversibility_sup(MinkowskiNorm::euclidean(diag({1, 4})), 64) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(reversibility_sup(MinkowskiNorm::randers(Matrix::Identity(2, 2), vec({0.5, 0})), 64) ==
        doctest::Approx(3.0).epsilon(1e-10));

  // (1 + beta)/(1 - beta), beta the a-dual length of b
  const Matrix a = diag({4, 1});
  const Vector b = vec({0.5, 0.3});
  const double expected = 2.2814453894875;
  CHECK(reversibility_sup(MinkowskiNorm::randers(a, b), 64) == doctest::Approx(expected).epsilon(1e-10));
  const double brute = oracle::brute_reversibility([&](const Vector& u) { return oracle::randers(a, b, u); }, 20000);
  CHECK(brute == doctest::Approx(expected).epsilon(1e-7));
  CHECK(brute <= expected + 1e-12);
}

TEST_CASE("reversibility in dimensions 1 and 3") {
  GenericParams p;
  p.value = [](const Vector& y) { return y(0) > 0 ? 2.0 * y(0) : -0.5 * y(0); };
  CHECK(reversibility_sup(MinkowskiNorm::generic(1, p), 8) == doctest::Approx(4.0));
  const auto r3 = MinkowskiNorm::randers(Matrix::Identity(3, 3), vec({0, 0.2, 0}));
  CHECK(reversibility_sup(r3, 32) == doctest::Approx(1.5).epsilon(1e-3));
  CHECK(reversibility_sup(r3, 32) <= 1.5 + 1e-12);
}

TEST_CASE("compose_linear") {
  const auto n = MinkowskiNorm::randers(diag({2, 1}), vec({0.3, 0.1}));
  Matrix l(2, 2);
  l << 1, 2, -0.5, 1;
  for (const auto& m : {compose_linear(n, l, 1.7), compose_linear(MinkowskiNorm::euclidean(diag({1, 3})), l, 0.5)}) {
    CHECK(m.family() != NormFamily::Generic);
  }
  const auto c = compose_linear(n, l, 1.7);
  for (const Vector& y : {vec({1, 0}), vec({0.2, -3})}) {
    CHECK(c(y) == doctest::Approx(1.7 * n(l * y)).epsilon(1e-13));
  }
}

TEST_CASE("generic norm falls back to differences") {
  GenericParams p;
  p.value = [](const Vector& y) { return std::sqrt(y(0) * y(0) + 4 * y(1) * y(1)); };
  const auto n = MinkowskiNorm::generic(2, p);
  CHECK_FALSE(n.has_analytic_gradient());
  CHECK((n.gradient(vec({1, 1})) - vec({1, 4}) / std::sqrt(5.0)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((fundamental_tensor(n, vec({1, 1})).matrix - diag({1, 4})).cwiseAbs().maxCoeff() < 1e-4);
}
