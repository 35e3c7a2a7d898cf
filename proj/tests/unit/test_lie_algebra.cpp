#include <doctest.h>

#include <random>

#include "finsler/errors.hpp"
#include "finsler/lie_algebra.hpp"

using namespace finsler;

namespace {

// h, e, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h
LieAlgebra sl2() {
  return LieAlgebra::from_entries(3, {{0, 1, 1, 2.0}, {0, 2, 2, -2.0}, {1, 2, 0, 1.0}});
}

Vector unit(int n, int i) { return Vector::Unit(n, i); }

}  // namespace

TEST_CASE("Killing forms") {
  CHECK((killing_gram(LieAlgebra::rotation()) + 2 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  const auto a = LieAlgebra::affine2();
  CHECK(killing_form(a, unit(2, 0), unit(2, 0)) == doctest::Approx(1.0));
  CHECK(killing_form(a, unit(2, 1), unit(2, 1)) == 0.0);
  CHECK(killing_gram(LieAlgebra::heisenberg()).cwiseAbs().maxCoeff() == 0.0);

  const Matrix g = killing_gram(sl2());
  CHECK(g(0, 0) == doctest::Approx(8.0));
  CHECK(g(1, 2) == doctest::Approx(4.0));
  const auto s = killing_signature(sl2());
  CHECK(s.positive == 2);
  CHECK(s.negative == 1);
  CHECK(s.zero == 0);
  const auto r = killing_signature(LieAlgebra::rotation());
  CHECK(r.negative == 3);
}

TEST_CASE("brackets and constants") {
  const auto r = LieAlgebra::rotation();
  CHECK((r.bracket(unit(3, 0), unit(3, 1)) - unit(3, 2)).norm() == 0.0);
  CHECK(r.constant(1, 2, 0) == 1.0);
  CHECK(r.constant(2, 1, 0) == -1.0);
  CHECK(r.entries().size() == 6u);
  CHECK((ad_matrix(r, unit(3, 2)) * unit(3, 0) - unit(3, 1)).norm() == 0.0);
  CHECK(r.jacobi_residual() == 0.0);
  CHECK(LieAlgebra::abelian(4).scale() == 0.0);
  const auto d = LieAlgebra::direct_sum(r, LieAlgebra::affine2());
  CHECK(d.dim() == 5);
  CHECK(d.constant(3, 4, 4) == 1.0);
  CHECK(d.constant(0, 3, 4) == 0.0);
}

TEST_CASE("invalid constants are rejected") {
  // [e0,[e1,e2]] + cyclic = -e0
  CHECK_THROWS_AS(LieAlgebra::from_entries(3, {{0, 1, 2, 1.0}, {0, 2, 2, 1.0}, {1, 2, 0, 1.0}}), InvalidAlgebra);
  CHECK_THROWS_AS(LieAlgebra::from_entries(2, {{0, 1, 5, 1.0}}), InvalidAlgebra);
  Matrix bad = Matrix::Zero(2, 2);
  bad(1, 0) = 1.0;  // ad(e0) e0 = e1 breaks antisymmetry
  CHECK_THROWS_AS(LieAlgebra({bad, Matrix::Zero(2, 2)}), InvalidAlgebra);
}

TEST_CASE("solvability") {
  const auto a = LieAlgebra::affine2();
  CHECK(derived_series(a) == std::vector<int>{2, 1, 0});
  CHECK(is_solvable(a));
  CHECK(cartan_solvability(a));
  CHECK(derived_series(LieAlgebra::heisenberg()) == std::vector<int>{3, 1, 0});
  CHECK(cartan_solvability(LieAlgebra::heisenberg()));
  CHECK(derived_series(LieAlgebra::rotation()) == std::vector<int>{3, 3});
  CHECK_FALSE(is_solvable(sl2()));
  CHECK_FALSE(cartan_solvability(sl2()));
  // the span of e and h in sl2 is a solvable subalgebra
  Matrix borel = Matrix::Zero(3, 2);
  borel(0, 0) = 1;
  borel(1, 1) = 1;
  CHECK(derived_series(sl2(), borel) == std::vector<int>{2, 1, 0});
}

TEST_CASE("radical and center") {
  const auto g = LieAlgebra::direct_sum(LieAlgebra::rotation(), LieAlgebra::abelian(1));
  const auto rad = killing_radical(g);
  CHECK(rad.basis.cols() == 1);
  CHECK(std::abs(rad.basis(3, 0)) == doctest::Approx(1.0));
  CHECK(rad.solvable);
  CHECK(center(g).cols() == 1);

  const auto h = killing_radical(LieAlgebra::heisenberg());
  CHECK(h.basis.cols() == 3);
  CHECK(h.solvable);
  CHECK(center(LieAlgebra::heisenberg()).cols() == 1);
  CHECK(killing_radical(sl2()).basis.cols() == 0);
}

TEST_CASE("ad-semisimplicity") {
  CHECK(ad_semisimple(LieAlgebra::rotation(), unit(3, 0)));
  CHECK(ad_semisimple(LieAlgebra::affine2(), unit(2, 0)));
  CHECK_FALSE(ad_semisimple(LieAlgebra::affine2(), unit(2, 1)));
  CHECK_FALSE(ad_semisimple(LieAlgebra::heisenberg(), unit(3, 0)));
  CHECK(ad_semisimple(LieAlgebra::heisenberg(), unit(3, 2)));
  CHECK(ad_semisimple(sl2(), unit(3, 0)));
  CHECK_FALSE(ad_semisimple(sl2(), unit(3, 1)));
  const auto rep = ad_semisimplicity(sl2(), unit(3, 0));
  CHECK(rep.semisimple);
  CHECK_FALSE(rep.ambiguous);

  CHECK(ad_nilpotent(sl2(), unit(3, 1)));
  CHECK_FALSE(ad_nilpotent(sl2(), unit(3, 0)));
}

TEST_CASE("semisimple and nilpotent together force ad = 0") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (const auto& g : {LieAlgebra::rotation(), LieAlgebra::affine2(), LieAlgebra::heisenberg(), sl2(),
                        LieAlgebra::direct_sum(LieAlgebra::rotation(), LieAlgebra::abelian(2))}) {
    for (int trial = 0; trial < 50; ++trial) {
      Vector u(g.dim());
      for (int i = 0; i < g.dim(); ++i) u(i) = n(rng);
      // sparse elements hit the nilpotent cone now and then
      if (trial % 3 == 0) u(trial % g.dim()) = 0.0;
      if (trial % 5 == 0) u.head(g.dim() - 1).setZero();
      if (ad_semisimple(g, u) && ad_nilpotent(g, u)) CHECK(ad_matrix(g, u).norm() <= 1e-8 * std::max(1.0, u.norm()));
    }
  }
}

TEST_CASE("compact decomposition") {
  const auto g = LieAlgebra::direct_sum(LieAlgebra::rotation(), LieAlgebra::abelian(2));
  const auto c = compact_decomposition_check(g);
  CHECK(c.compact_type);
  CHECK(c.derived_dim == 3);
  CHECK(c.center_dim == 2);
  CHECK(c.kernel_dim == 2);
  CHECK(c.kernel_is_center);
  CHECK(c.direct_sum);

  const auto h = compact_decomposition_check(LieAlgebra::heisenberg());
  CHECK(h.kernel_dim == 3);
  CHECK_FALSE(h.kernel_is_center);
  CHECK_FALSE(h.direct_sum);
  const auto s = compact_decomposition_check(sl2());
  CHECK_FALSE(s.compact_type);
  CHECK(s.derived_dim == 3);
  CHECK(s.center_dim == 0);
}
