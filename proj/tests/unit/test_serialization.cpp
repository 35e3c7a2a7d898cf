#include <doctest.h>

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/serialization.hpp"

using namespace finsler;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("norm round trips") {
  Matrix a(2, 2);
  a << 2, 0.3, 0.3, 1;
  const auto r = MinkowskiNorm::randers(a, v2(0.2, -0.4));
  const auto back = norm_from_json(norm_to_json(r));
  CHECK(back.family() == NormFamily::Randers);
  for (const Vector& y : {v2(1, 0), v2(-0.3, 2)}) CHECK(back(y) == r(y));

  const auto e = norm_from_json(json::parse(R"({"family": "euclidean", "dim": 2, "Q": [[1, 0], [0, 4]]})"));
  CHECK(e(v2(0, 1)) == doctest::Approx(2.0));

  GenericParams p;
  p.value = [](const Vector& y) { return y.norm(); };
  CHECK_THROWS_AS(norm_to_json(MinkowskiNorm::generic(2, p)), ConfigError);
  CHECK_THROWS_AS(norm_from_json(json::parse(R"({"family": "finsler"})")), ConfigError);
  CHECK_THROWS_AS(norm_from_json(json::parse(R"({"family": "randers", "a": [[1, 0], [0, 1]], "b": [1.5, 0]})")),
                  InvalidNorm);
  CHECK_THROWS_AS(norm_from_json(json::parse(R"({"family": "randers", "a": "identity"})")), ConfigError);
}

TEST_CASE("manifolds, scalars and fields") {
  for (const auto& m : {ManifoldModel::circle(3.0), ManifoldModel::flat_torus(), ManifoldModel::sphere2(2.0)}) {
    const auto back = manifold_from_json(manifold_to_json(m));
    CHECK(back.kind() == m.kind());
    CHECK(manifold_to_json(back) == manifold_to_json(m));
  }
  CHECK_THROWS_AS(manifold_from_json(json::parse(R"({"kind": "klein"})")), ConfigError);

  const std::vector<FourierTerm> terms{FourierTerm{Eigen::Vector2i(0, 0), 2.0, 0.0}, FourierTerm{Eigen::Vector2i(1, -1), 0.5, 0.25}};
  const auto tb = fourier_terms_from_json(fourier_terms_to_json(terms));
  REQUIRE(tb.size() == 2u);
  CHECK(tb[1].mode == terms[1].mode);
  CHECK(tb[1].sin_coeff == 0.25);

  const auto f = field_from_json(json::parse(R"({
    "manifold": {"kind": "torus", "lattice": [[1, 0], [0, 1]]},
    "metric": {"type": "constant", "norm": {"family": "randers", "a": [[1, 0], [0, 1]], "b": [0.5, 0]}},
    "rho": [{"mode": [0, 0], "cos": 2}, {"mode": [1, 0], "cos": 1}]})"));
  CHECK(f(make_point({0.0, 0.3}), v2(1, 0)) == doctest::Approx(4.5));

  const auto s = field_from_json(json::parse(R"({"manifold": {"kind": "sphere", "radius": 1},
    "metric": {"type": "round"}, "rho": [{"powers": [0, 0, 0], "coeff": 3}]})"));
  CHECK(s(make_point({0, 0}, 0), v2(1, 0)) == doctest::Approx(6.0));
  CHECK_THROWS_AS(field_from_json(json::parse(R"({"manifold": {"kind": "sphere", "radius": 1}, "metric": {"type": "wavy"}})")),
                  ConfigError);
}

TEST_CASE("Lie algebras") {
  const auto r = LieAlgebra::rotation();
  const auto back = lie_algebra_from_json(lie_algebra_to_json(r));
  CHECK(back.dim() == 3);
  CHECK(back.constant(0, 1, 2) == 1.0);
  CHECK_THROWS_AS(lie_algebra_from_json(json::parse(R"({"dim": 2, "entries": [[0, 1]]})")), ConfigError);
  CHECK_THROWS_AS(lie_algebra_from_json(json::parse(R"({"dim": 3, "entries": [[0, 1, 2, 1], [0, 2, 2, 1], [1, 2, 0, 1]]})")),
                  InvalidAlgebra);
}

TEST_CASE("experiment configs") {
  ExperimentConfig c;
  c.name = "randers-torus";
  c.grid = 16;
  c.seed = 7;
  c.norm = MinkowskiNorm::randers(Matrix::Identity(2, 2), v2(0.1, 0.2));
  const auto back = config_from_json(config_to_json(c));
  CHECK(back.name == "randers-torus");
  CHECK(back.grid == 16);
  CHECK(back.seed == 7u);
  REQUIRE(back.norm.has_value());
  CHECK((*back.norm)(v2(1, 1)) == doctest::Approx((*c.norm)(v2(1, 1))));

  CHECK(config_from_json(json("s2-round")).name == "s2-round");
  ExperimentConfig defaults;
  defaults.tol = 1e-9;
  const auto partial = config_from_json(json::parse(R"({"name": "s2-round", "degree": 3})"), defaults);
  CHECK(partial.degree == 3);
  CHECK(partial.tol == 1e-9);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"name": "s2-round", "grid": "dense"})")), ConfigError);
}

TEST_CASE("non-finite numbers") {
  CHECK(number_to_json(INFINITY) == "inf");
  CHECK(number_to_json(-INFINITY) == "-inf");
  CHECK(number_to_json(NAN) == "nan");
  CHECK(number_to_json(1.5) == 1.5);
  const Matrix m = matrix_from_json(matrix_to_json(Matrix::Identity(2, 3)));
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1, 2], [3]]")), ConfigError);
}

TEST_CASE("solve reports serialize") {
  const auto s = ManifoldModel::sphere2();
  const auto r = solve_fields(FinslerField::round_sphere(s), FieldBasis::sphere_conformal(s, 1));
  const json j = solve_report_to_json(r);
  CHECK(j.at("killing_dim") == 3);
  CHECK(j.at("conformal_dim") == 6);
  CHECK(j.dump().find("NaN") == std::string::npos);
}
