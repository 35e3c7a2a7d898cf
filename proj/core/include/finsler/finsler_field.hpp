#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "finsler/manifold.hpp"
#include "finsler/norm.hpp"

namespace finsler {

namespace detail {
class MetricAssignment;
}

/// A Finsler metric on a model manifold, given chart-wise.
///
/// Built-in assignments: a constant Minkowski norm (circle, torus), the round
/// metric 2R|y|/(1+|u|^2) on both sphere charts, the one-dimensional
/// asymmetric metric alpha(x) y / beta(x) |y| on the circle, conformal
/// rescales rho*F, pullbacks f*F and pointwise averages. x-derivatives are
/// analytic for the first four; pullbacks and averages use central
/// differences in the chart coordinates.
class FinslerField {
 public:
  static FinslerField constant_norm(const ManifoldModel& manifold, const MinkowskiNorm& norm);
  static FinslerField round_sphere(const ManifoldModel& sphere);
  /// F(x, y) = forward(x) y for y > 0 and backward(x) (-y) for y < 0.
  static FinslerField circle_asymmetric(const ManifoldModel& circle, const ScalarField& forward,
                                        const ScalarField& backward);
  /// rho must be positive on the manifold.
  static FinslerField conformal_rescale(const FinslerField& base, const ScalarField& rho);

  const ManifoldModel& manifold() const noexcept { return manifold_; }
  std::string describe() const;
  /// True when every slice is Euclidean.
  bool is_riemannian() const;

  /// F(x, y). Throws ChartDomainError for a point outside its chart.
  double operator()(const Point& x, const Vector& y) const;
  Vector grad_y(const Point& x, const Vector& y) const;
  Vector grad_x(const Point& x, const Vector& y) const;
  /// The Minkowski norm F(x, .) on T_xM in chart coordinates.
  MinkowskiNorm slice(const Point& x) const;

 private:
  friend FinslerField pullback_metric(const FinslerField&, const Diffeomorphism&);
  friend FinslerField averaged_metric_field(const FinslerField&, int);

  FinslerField(ManifoldModel manifold, std::shared_ptr<const detail::MetricAssignment> impl);

  ManifoldModel manifold_;
  std::shared_ptr<const detail::MetricAssignment> impl_;
};

double metric_eval(const FinslerField& field, const Point& x, const Vector& y);

/// (L_V F)(x, y) = V^i dF/dx^i + y^j (dV^i/dx^j) dF/dy^i: the derivative of F
/// along the complete lift of V. Throws DegenerateInput for y near 0.
double lie_derivative(const FinslerField& field, const VectorField& v, const Point& x,
                      const Vector& y);

/// (f*F)(x, y) = F(f(x), f_* y).
FinslerField pullback_metric(const FinslerField& field, const Diffeomorphism& f);

/// Pointwise averaged Riemannian metric (every slice is Euclidean).
FinslerField averaged_metric_field(const FinslerField& field, int resolution);

/// max |F(x,y)/F(x,y') - F(fx, f_*y)/F(fx, f_*y')| over the points and
/// `directions` equispaced unit directions per point.
double isometry_ratio_invariance(const FinslerField& field, const Diffeomorphism& f,
                                 const std::vector<Point>& points, int directions);

/// Max relative mismatch of F across the two sphere charts on overlap
/// samples (0 on single-chart models).
double chart_compatibility_residual(const FinslerField& field, int samples);

struct LambdaProfile {
  std::vector<double> x;
  std::vector<double> lambda;
  double spread = 0.0;
  bool constant = false;
};

/// lambda(x) = max(F(x,1)/F(x,-1), F(x,-1)/F(x,1)) on `grid` equispaced
/// points of the circle; `constant` when max - min <= tol.
LambdaProfile circle_lambda_profile(const FinslerField& field, int grid, double tol = 1e-10);

/// CSV table "x,value".
void write_profile_csv(std::ostream& out, const std::vector<double>& x,
                       const std::vector<double>& values);

/// Equispaced grid of grid_n x grid_n points of the torus (offset in
/// fractional coordinates), or a Fibonacci point set on the sphere.
std::vector<Point> sample_points(const ManifoldModel& manifold, int count, double offset = 0.0);

}  // namespace finsler
