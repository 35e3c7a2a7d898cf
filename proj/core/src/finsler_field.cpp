#include "finsler/finsler_field.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "finsler/averaging.hpp"
#include "finsler/errors.hpp"

namespace finsler {

namespace detail {

class MetricAssignment {
 public:
  virtual ~MetricAssignment() = default;
  virtual double value(const Point& x, const Vector& y) const = 0;
  virtual Vector grad_y(const Point& x, const Vector& y) const = 0;
  virtual Vector grad_x(const Point& x, const Vector& y) const = 0;
  virtual MinkowskiNorm slice(const Point& x) const = 0;
  virtual bool riemannian() const = 0;
  virtual std::string describe() const = 0;
};

}  // namespace detail

namespace {

using detail::MetricAssignment;

constexpr double kXStep = 1e-5;

Vector central_x_gradient(const ManifoldModel& m, const MetricAssignment& impl, const Point& x,
                          const Vector& y) {
  Vector g(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    Point xp = x, xm = x;
    xp.coords(i) += kXStep;
    xm.coords(i) -= kXStep;
    g(i) = (impl.value(xp, y) - impl.value(xm, y)) / (2.0 * kXStep);
  }
  return g;
}

class ConstantNorm final : public MetricAssignment {
 public:
  explicit ConstantNorm(MinkowskiNorm norm) : norm_(std::move(norm)) {}
  double value(const Point&, const Vector& y) const override { return norm_(y); }
  Vector grad_y(const Point&, const Vector& y) const override { return norm_.gradient(y); }
  Vector grad_x(const Point& x, const Vector&) const override { return Vector::Zero(x.coords.size()); }
  MinkowskiNorm slice(const Point&) const override { return norm_; }
  bool riemannian() const override { return norm_.family() == NormFamily::Euclidean; }
  std::string describe() const override {
    switch (norm_.family()) {
      case NormFamily::Euclidean:
        return "constant-euclidean";
      case NormFamily::Randers:
        return "constant-randers";
      default:
        return "constant-generic";
    }
  }

 private:
  MinkowskiNorm norm_;
};

class RoundSphere final : public MetricAssignment {
 public:
  explicit RoundSphere(double radius) : radius_(radius) {}
  double factor(const Point& x) const { return 2.0 * radius_ / (1.0 + x.coords.squaredNorm()); }
  double value(const Point& x, const Vector& y) const override { return factor(x) * y.norm(); }
  Vector grad_y(const Point& x, const Vector& y) const override { return factor(x) * y / y.norm(); }
  Vector grad_x(const Point& x, const Vector& y) const override {
    const double d = 1.0 + x.coords.squaredNorm();
    return (-4.0 * radius_ / (d * d)) * y.norm() * x.coords;
  }
  MinkowskiNorm slice(const Point& x) const override {
    const double s = factor(x);
    return MinkowskiNorm::euclidean(s * s * Matrix::Identity(2, 2));
  }
  bool riemannian() const override { return true; }
  std::string describe() const override { return "round-sphere"; }

 private:
  double radius_;
};

class CircleAsymmetric final : public MetricAssignment {
 public:
  CircleAsymmetric(ScalarField forward, ScalarField backward)
      : forward_(std::move(forward)), backward_(std::move(backward)) {}
  double value(const Point& x, const Vector& y) const override {
    if (y(0) > 0.0) return forward_.value(x) * y(0);
    if (y(0) < 0.0) return -backward_.value(x) * y(0);
    return 0.0;
  }
  Vector grad_y(const Point& x, const Vector& y) const override {
    return Vector::Constant(1, y(0) >= 0.0 ? forward_.value(x) : -backward_.value(x));
  }
  Vector grad_x(const Point& x, const Vector& y) const override {
    if (y(0) >= 0.0) return forward_.gradient(x) * y(0);
    return -backward_.gradient(x) * y(0);
  }
  MinkowskiNorm slice(const Point& x) const override {
    const double a = forward_.value(x);
    const double b = backward_.value(x);
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidNorm("circle metric must be positive in both directions");
    GenericParams p;
    p.label = "circle-asymmetric";
    p.value = [a, b](const Vector& y) { return y(0) >= 0.0 ? a * y(0) : -b * y(0); };
    p.gradient = [a, b](const Vector& y) { return Vector::Constant(1, y(0) >= 0.0 ? a : -b); };
    p.hessian = [](const Vector&) { return Matrix(Matrix::Zero(1, 1)); };
    return MinkowskiNorm::generic(1, std::move(p));
  }
  bool riemannian() const override {
    // Reversible 1-D norms are Euclidean; sample the two coefficient functions.
    for (int k = 0; k < 64; ++k) {
      Point x{0, Vector::Constant(1, forward_.manifold().length() * k / 64.0)};
      if (std::abs(forward_.value(x) - backward_.value(x)) > 1e-12) return false;
    }
    return true;
  }
  std::string describe() const override { return "circle-asymmetric"; }

 private:
  ScalarField forward_;
  ScalarField backward_;
};

class ConformalRescale final : public MetricAssignment {
 public:
  ConformalRescale(std::shared_ptr<const MetricAssignment> base, ScalarField rho)
      : base_(std::move(base)), rho_(std::move(rho)) {}
  double value(const Point& x, const Vector& y) const override { return rho_.value(x) * base_->value(x, y); }
  Vector grad_y(const Point& x, const Vector& y) const override { return rho_.value(x) * base_->grad_y(x, y); }
  Vector grad_x(const Point& x, const Vector& y) const override {
    return rho_.gradient(x) * base_->value(x, y) + rho_.value(x) * base_->grad_x(x, y);
  }
  MinkowskiNorm slice(const Point& x) const override {
    const double r = rho_.value(x);
    if (!(r > 0.0)) throw InvalidNorm("conformal factor must be positive");
    const MinkowskiNorm s = base_->slice(x);
    return compose_linear(s, Matrix::Identity(s.dim(), s.dim()), r);
  }
  bool riemannian() const override { return base_->riemannian(); }
  std::string describe() const override { return "rescaled(" + base_->describe() + ")"; }

 private:
  std::shared_ptr<const MetricAssignment> base_;
  ScalarField rho_;
};

class Pullback final : public MetricAssignment {
 public:
  Pullback(ManifoldModel m, std::shared_ptr<const MetricAssignment> base, Diffeomorphism f)
      : m_(std::move(m)), base_(std::move(base)), f_(std::move(f)) {}
  double value(const Point& x, const Vector& y) const override {
    return base_->value(f_(x), f_.differential(x) * y);
  }
  Vector grad_y(const Point& x, const Vector& y) const override {
    const Matrix df = f_.differential(x);
    return df.transpose() * base_->grad_y(f_(x), df * y);
  }
  Vector grad_x(const Point& x, const Vector& y) const override { return central_x_gradient(m_, *this, x, y); }
  MinkowskiNorm slice(const Point& x) const override {
    const Matrix df = f_.differential(x);
    return compose_linear(base_->slice(f_(x)), df, 1.0);
  }
  bool riemannian() const override { return base_->riemannian(); }
  std::string describe() const override { return "pullback(" + base_->describe() + ")"; }

 private:
  ManifoldModel m_;
  std::shared_ptr<const MetricAssignment> base_;
  Diffeomorphism f_;
};

class Averaged final : public MetricAssignment {
 public:
  Averaged(ManifoldModel m, std::shared_ptr<const MetricAssignment> base, int resolution)
      : m_(std::move(m)), base_(std::move(base)), resolution_(resolution) {}
  Matrix tensor(const Point& x) const {
    return averaged_norm(base_->slice(x), resolution_).matrix;
  }
  double value(const Point& x, const Vector& y) const override {
    return std::sqrt(std::max(0.0, y.dot(tensor(x) * y)));
  }
  Vector grad_y(const Point& x, const Vector& y) const override {
    const Vector qy = tensor(x) * y;
    return qy / std::sqrt(y.dot(qy));
  }
  Vector grad_x(const Point& x, const Vector& y) const override { return central_x_gradient(m_, *this, x, y); }
  MinkowskiNorm slice(const Point& x) const override { return MinkowskiNorm::euclidean(tensor(x)); }
  bool riemannian() const override { return true; }
  std::string describe() const override { return "averaged(" + base_->describe() + ")"; }

 private:
  ManifoldModel m_;
  std::shared_ptr<const MetricAssignment> base_;
  int resolution_;
};

}  // namespace

FinslerField::FinslerField(ManifoldModel manifold, std::shared_ptr<const detail::MetricAssignment> impl)
    : manifold_(std::move(manifold)), impl_(std::move(impl)) {}

FinslerField FinslerField::constant_norm(const ManifoldModel& manifold, const MinkowskiNorm& norm) {
  if (manifold.kind() == ManifoldKind::Sphere2) {
    throw std::invalid_argument("constant norms are only defined on the circle and the torus");
  }
  if (norm.dim() != manifold.dim()) throw std::invalid_argument("norm dimension != manifold dimension");
  return FinslerField(manifold, std::make_shared<ConstantNorm>(norm));
}

FinslerField FinslerField::round_sphere(const ManifoldModel& sphere) {
  if (sphere.kind() != ManifoldKind::Sphere2) throw std::invalid_argument("round_sphere needs the sphere");
  return FinslerField(sphere, std::make_shared<RoundSphere>(sphere.radius()));
}

FinslerField FinslerField::circle_asymmetric(const ManifoldModel& circle, const ScalarField& forward,
                                             const ScalarField& backward) {
  if (circle.kind() != ManifoldKind::Circle) throw std::invalid_argument("circle_asymmetric needs the circle");
  return FinslerField(circle, std::make_shared<CircleAsymmetric>(forward, backward));
}

FinslerField FinslerField::conformal_rescale(const FinslerField& base, const ScalarField& rho) {
  if (rho.manifold().kind() != base.manifold().kind()) {
    throw std::invalid_argument("conformal factor lives on a different manifold");
  }
  return FinslerField(base.manifold_, std::make_shared<ConformalRescale>(base.impl_, rho));
}

std::string FinslerField::describe() const { return manifold_.name() + ":" + impl_->describe(); }

bool FinslerField::is_riemannian() const { return impl_->riemannian(); }

double FinslerField::operator()(const Point& x, const Vector& y) const {
  manifold_.check_point(x);
  if (y.size() != manifold_.dim()) throw std::invalid_argument("tangent vector has the wrong dimension");
  return impl_->value(x, y);
}

Vector FinslerField::grad_y(const Point& x, const Vector& y) const {
  manifold_.check_point(x);
  return impl_->grad_y(x, y);
}

Vector FinslerField::grad_x(const Point& x, const Vector& y) const {
  manifold_.check_point(x);
  return impl_->grad_x(x, y);
}

MinkowskiNorm FinslerField::slice(const Point& x) const {
  manifold_.check_point(x);
  return impl_->slice(x);
}

double metric_eval(const FinslerField& field, const Point& x, const Vector& y) { return field(x, y); }

double lie_derivative(const FinslerField& field, const VectorField& v, const Point& x, const Vector& y) {
  if (!(y.norm() > 1e-12)) throw DegenerateInput("Lie derivative of F requested on the zero section");
  const FieldValue vx = v.evaluate(x);
  return vx.value.dot(field.grad_x(x, y)) + (vx.jacobian * y).dot(field.grad_y(x, y));
}

FinslerField pullback_metric(const FinslerField& field, const Diffeomorphism& f) {
  if (f.manifold().kind() != field.manifold().kind()) {
    throw std::invalid_argument("diffeomorphism acts on a different manifold");
  }
  return FinslerField(field.manifold_, std::make_shared<Pullback>(field.manifold_, field.impl_, f));
}

FinslerField averaged_metric_field(const FinslerField& field, int resolution) {
  return FinslerField(field.manifold_, std::make_shared<Averaged>(field.manifold_, field.impl_, resolution));
}

namespace {

std::vector<Vector> unit_directions(int dim, int count) {
  std::vector<Vector> out;
  if (dim == 1) {
    out.push_back(Vector::Constant(1, 1.0));
    out.push_back(Vector::Constant(1, -1.0));
    return out;
  }
  for (int k = 0; k < count; ++k) {
    const double t = 2.0 * std::numbers::pi * (k + 0.25) / count;
    Vector y(2);
    y << std::cos(t), std::sin(t);
    out.push_back(y);
  }
  return out;
}

}  // namespace

double isometry_ratio_invariance(const FinslerField& field, const Diffeomorphism& f,
                                 const std::vector<Point>& points, int directions) {
  double worst = 0.0;
  const auto dirs = unit_directions(field.manifold().dim(), directions);
  for (const Point& x : points) {
    const Point fx = f(x);
    const Matrix df = f.differential(x);
    for (const Vector& y : dirs) {
      for (const Vector& y2 : dirs) {
        const double lhs = field(x, y) / field(x, y2);
        const double rhs = field(fx, df * y) / field(fx, df * y2);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

double chart_compatibility_residual(const FinslerField& field, int samples) {
  const ManifoldModel& m = field.manifold();
  if (m.chart_count() < 2) return 0.0;
  double worst = 0.0;
  const auto dirs = unit_directions(2, 8);
  for (int k = 0; k < samples; ++k) {
    const double r = 0.55 + 1.4 * (k + 0.5) / samples;
    const double t = 2.399963229728653 * k;
    for (int c = 0; c < 2; ++c) {
      Point p{c, Vector(2)};
      p.coords << r * std::cos(t), r * std::sin(t);
      const Point q = m.to_chart(p, 1 - c);
      const Matrix j = m.transition_jacobian(p, 1 - c);
      for (const Vector& y : dirs) {
        const double a = field(p, y);
        worst = std::max(worst, std::abs(a - field(q, j * y)) / a);
      }
    }
  }
  return worst;
}

LambdaProfile circle_lambda_profile(const FinslerField& field, int grid, double tol) {
  if (field.manifold().kind() != ManifoldKind::Circle) {
    throw std::invalid_argument("circle_lambda_profile needs a field on the circle");
  }
  if (grid < 1) throw std::invalid_argument("circle_lambda_profile: grid must be positive");
  LambdaProfile out;
  const Vector e = Vector::Constant(1, 1.0);
  for (int k = 0; k < grid; ++k) {
    const Point x{0, Vector::Constant(1, field.manifold().length() * k / grid)};
    const double forward = field(x, e);
    const double backward = field(x, Vector(-e));
    out.x.push_back(x.coords(0));
    out.lambda.push_back(std::max(forward / backward, backward / forward));
  }
  const auto [lo, hi] = std::minmax_element(out.lambda.begin(), out.lambda.end());
  out.spread = *hi - *lo;
  out.constant = out.spread <= tol;
  return out;
}

void write_profile_csv(std::ostream& out, const std::vector<double>& x, const std::vector<double>& values) {
  out << "x,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < x.size() && i < values.size(); ++i) out << x[i] << ',' << values[i] << '\n';
}

std::vector<Point> sample_points(const ManifoldModel& manifold, int count, double offset) {
  std::vector<Point> out;
  switch (manifold.kind()) {
    case ManifoldKind::Circle:
      for (int k = 0; k < count; ++k) {
        out.push_back(Point{0, Vector::Constant(1, manifold.length() * (k + offset) / count)});
      }
      break;
    case ManifoldKind::FlatTorus:
      for (int i = 0; i < count; ++i) {
        for (int j = 0; j < count; ++j) {
          Vector s(2);
          s << (i + offset) / count, (j + offset) / count;
          out.push_back(Point{0, manifold.lattice() * s});
        }
      }
      break;
    case ManifoldKind::Sphere2: {
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int k = 0; k < count; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double t = golden * k + 2.0 * std::numbers::pi * offset;
        out.push_back(manifold.from_ambient(Eigen::Vector3d(r * std::cos(t), r * std::sin(t), z)));
      }
      break;
    }
  }
  return out;
}

}  // namespace finsler
