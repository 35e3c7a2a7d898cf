#pragma once

#include <array>
#include <complex>
#include <functional>
#include <initializer_list>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "finsler/types.hpp"

namespace finsler {

/// A point given in one chart. Circle and torus have a single chart (0);
/// the sphere has stereographic charts 0 (from the north pole, z = 0 at the
/// south pole) and 1 (from the south pole), related by w = 1/conj(z).
struct Point {
  int chart = 0;
  Vector coords;
};

Point make_point(std::initializer_list<double> coords, int chart = 0);

enum class ManifoldKind { Circle, FlatTorus, Sphere2 };

class ManifoldModel {
 public:
  /// Circle of the given length; coordinate x is periodic mod length.
  static ManifoldModel circle(double length);
  /// R^2 / (lattice Z^2), lattice vectors are the columns.
  static ManifoldModel flat_torus(Matrix lattice = Matrix::Identity(2, 2));
  static ManifoldModel sphere2(double radius = 1.0);

  ManifoldKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return kind_ == ManifoldKind::Circle ? 1 : 2; }
  int chart_count() const noexcept { return kind_ == ManifoldKind::Sphere2 ? 2 : 1; }
  double length() const noexcept { return length_; }
  const Matrix& lattice() const noexcept { return lattice_; }
  double radius() const noexcept { return radius_; }
  std::string name() const;

  /// Throws ChartDomainError for a bad chart index, wrong dimension,
  /// non-finite coordinates, or |u| >= 2 on a sphere chart.
  void check_point(const Point& p) const;

  /// Torus/circle coordinates wrapped into the fundamental cell; sphere
  /// points moved to the chart where |u| <= 1.
  Point canonical(const Point& p) const;

  /// Same point expressed in `chart`.
  Point to_chart(const Point& p, int chart) const;
  /// d(coords in `chart`) / d(coords of p).
  Matrix transition_jacobian(const Point& p, int chart) const;

  /// Sphere only: the unit vector X with R*X the embedded point.
  Eigen::Vector3d ambient(const Point& p) const;
  /// Sphere only: canonical chart point of the unit vector X.
  Point from_ambient(const Eigen::Vector3d& x) const;

  /// Max |p - to_chart(to_chart(p, other), p.chart)| over overlap samples
  /// (0 for single-chart models).
  double transition_residual(int samples) const;

 private:
  ManifoldKind kind_ = ManifoldKind::FlatTorus;
  double length_ = 1.0;
  Matrix lattice_ = Matrix::Identity(2, 2);
  double radius_ = 1.0;
};

/// One term a*cos(2 pi k.s) + b*sin(2 pi k.s), s = lattice^{-1} x.
struct FourierTerm {
  Eigen::VectorXi mode;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

/// Truncated Fourier series of a function periodic under a lattice.
class FourierSeries {
 public:
  FourierSeries(Matrix lattice, std::vector<FourierTerm> terms);
  static FourierSeries constant(Matrix lattice, double c);

  int dim() const noexcept { return static_cast<int>(lattice_.rows()); }
  const Matrix& lattice() const noexcept { return lattice_; }
  const std::vector<FourierTerm>& terms() const noexcept { return terms_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

 private:
  Matrix lattice_;
  Matrix dual_;  // lattice^{-T}
  std::vector<FourierTerm> terms_;
};

/// coeff * X1^p0 X2^p1 X3^p2 for the unit ambient vector X.
struct MonomialTerm {
  std::array<int, 3> powers{0, 0, 0};
  double coeff = 0.0;
};

/// Polynomial in the ambient coordinates, restricted to the unit sphere.
struct SpherePolynomial {
  std::vector<MonomialTerm> terms;
};

/// Smooth scalar function on a model manifold (conformal factors, rho basis).
class ScalarField {
 public:
  ScalarField(ManifoldModel manifold, FourierSeries series);
  ScalarField(ManifoldModel manifold, SpherePolynomial poly);
  static ScalarField constant(const ManifoldModel& manifold, double c);

  const ManifoldModel& manifold() const noexcept { return manifold_; }
  double value(const Point& p) const;
  /// Gradient in the chart coordinates of p.
  Vector gradient(const Point& p) const;

  const std::variant<FourierSeries, SpherePolynomial>& data() const noexcept { return data_; }

 private:
  ManifoldModel manifold_;
  std::variant<FourierSeries, SpherePolynomial> data_;
};

/// Value and chart Jacobian (row i = component, column j = d/dx^j).
struct FieldValue {
  Vector value;
  Matrix jacobian;
};

/// A tangent vector field with analytic first derivatives.
class VectorField {
 public:
  using Evaluator = std::function<FieldValue(const Point&)>;

  VectorField(ManifoldModel manifold, Evaluator evaluator, std::string label = {});

  const ManifoldModel& manifold() const noexcept { return manifold_; }
  const std::string& label() const noexcept { return label_; }

  FieldValue evaluate(const Point& p) const;
  Vector operator()(const Point& p) const { return evaluate(p).value; }

  /// sum_a coeffs(a) * fields[a].
  static VectorField combination(const std::vector<VectorField>& fields, const Vector& coeffs,
                                 std::string label = {});

 private:
  ManifoldModel manifold_;
  Evaluator evaluator_;
  std::string label_;
};

/// Component `component` of an ambient polynomial vector field P(X) on R^3.
struct AmbientTerm {
  int component = 0;
  std::array<int, 3> powers{0, 0, 0};
  double coeff = 0.0;
};

VectorField torus_constant_field(const ManifoldModel& torus, const Vector& v);
/// e_direction * cos(2 pi k.s) (or sin), s = lattice^{-1} x.
VectorField torus_fourier_field(const ManifoldModel& torus, int direction,
                                const Eigen::VectorXi& mode, bool sine);
/// Tangential projection P - (P.X) X of an ambient polynomial field.
VectorField sphere_ambient_field(const ManifoldModel& sphere, std::vector<AmbientTerm> terms,
                                 std::string label = {});
/// e_axis x X: rotation about coordinate axis `axis` (0, 1, 2).
VectorField sphere_rotation_field(const ManifoldModel& sphere, int axis);
/// e_axis - X_axis X: gradient of the ambient coordinate X_axis.
VectorField sphere_gradient_field(const ManifoldModel& sphere, int axis);
/// Generator of z -> z + t b in chart 0 (b real): the constant field (b, 0).
VectorField sphere_mobius_translation_field(const ManifoldModel& sphere, double b);

/// Diffeomorphism with its differential, both given chart-wise.
class Diffeomorphism {
 public:
  using Map = std::function<Point(const Point&)>;
  using Differential = std::function<Matrix(const Point&)>;

  Diffeomorphism(ManifoldModel manifold, Map map, Differential differential,
                 std::string label = {});

  const ManifoldModel& manifold() const noexcept { return manifold_; }
  const std::string& label() const noexcept { return label_; }

  Point operator()(const Point& p) const { return map_(p); }
  /// d(coords of f(p) in its chart) / d(coords of p).
  Matrix differential(const Point& p) const { return differential_(p); }

  static Diffeomorphism torus_translation(const ManifoldModel& torus, const Vector& shift);
  static Diffeomorphism circle_rotation(const ManifoldModel& circle, double shift);
  /// Rotation of the sphere by `angle` about the unit ambient axis.
  static Diffeomorphism sphere_rotation(const ManifoldModel& sphere, const Eigen::Vector3d& axis,
                                        double angle);
  /// zeta -> (a zeta + b) / (c zeta + d) on zeta = z (chart 0) extended to CP^1.
  static Diffeomorphism sphere_mobius(const ManifoldModel& sphere, std::complex<double> a,
                                      std::complex<double> b, std::complex<double> c,
                                      std::complex<double> d);

 private:
  ManifoldModel manifold_;
  Map map_;
  Differential differential_;
  std::string label_;
};

}  // namespace finsler
