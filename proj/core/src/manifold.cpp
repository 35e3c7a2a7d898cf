#include "finsler/manifold.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "finsler/errors.hpp"
#include "sphere_charts.hpp"

namespace finsler {

namespace {

constexpr double kSphereChartLimit = 2.0;

using detail::Ad2;

std::array<double, 3> to_array(const Eigen::Vector3d& x) { return {x(0), x(1), x(2)}; }

Vector chart_coords(const std::array<double, 2>& u) {
  Vector out(2);
  out << u[0], u[1];
  return out;
}

int chart_for(double x3) { return x3 <= 0.0 ? 0 : 1; }

FieldValue from_ad(const std::array<Ad2, 2>& v) {
  FieldValue out;
  out.value.resize(2);
  out.jacobian.resize(2, 2);
  for (int i = 0; i < 2; ++i) {
    out.value(i) = v[static_cast<std::size_t>(i)].value();
    out.jacobian.row(i) = v[static_cast<std::size_t>(i)].derivatives().transpose();
  }
  return out;
}

// Builds a sphere diffeomorphism from a map on the unit ambient sphere,
// written once for doubles and AutoDiff scalars.
template <class AmbientMap>
Diffeomorphism sphere_map(const ManifoldModel& sphere, AmbientMap f, std::string label) {
  auto target = [sphere, f](const Point& p) {
    sphere.check_point(p);
    const auto x = detail::chart_to_ambient(p.chart, p.coords(0), p.coords(1));
    const auto y = f(x);
    const int chart = chart_for(y[2]);
    return Point{chart, chart_coords(detail::ambient_to_chart(chart, y))};
  };
  auto map = [target](const Point& p) { return target(p); };
  auto differential = [target, f](const Point& p) {
    const int chart = target(p).chart;
    const auto u = detail::seed(p.coords);
    const auto x = detail::chart_to_ambient(p.chart, u[0], u[1]);
    const auto v = detail::ambient_to_chart(chart, f(x));
    Matrix j(2, 2);
    j.row(0) = v[0].derivatives().transpose();
    j.row(1) = v[1].derivatives().transpose();
    return j;
  };
  return Diffeomorphism(sphere, map, differential, std::move(label));
}

}  // namespace

Point make_point(std::initializer_list<double> coords, int chart) {
  Point p;
  p.chart = chart;
  p.coords.resize(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p.coords(i++) = c;
  return p;
}

ManifoldModel ManifoldModel::circle(double length) {
  if (!(length > 0.0)) throw std::invalid_argument("circle length must be positive");
  ManifoldModel m;
  m.kind_ = ManifoldKind::Circle;
  m.length_ = length;
  return m;
}

ManifoldModel ManifoldModel::flat_torus(Matrix lattice) {
  if (lattice.rows() != 2 || lattice.cols() != 2 || std::abs(lattice.determinant()) < 1e-12) {
    throw std::invalid_argument("torus lattice must be a nondegenerate 2x2 matrix");
  }
  ManifoldModel m;
  m.kind_ = ManifoldKind::FlatTorus;
  m.lattice_ = std::move(lattice);
  return m;
}

ManifoldModel ManifoldModel::sphere2(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  ManifoldModel m;
  m.kind_ = ManifoldKind::Sphere2;
  m.radius_ = radius;
  return m;
}

std::string ManifoldModel::name() const {
  std::ostringstream os;
  switch (kind_) {
    case ManifoldKind::Circle:
      os << "circle(L=" << length_ << ")";
      break;
    case ManifoldKind::FlatTorus:
      os << "flat-torus";
      break;
    case ManifoldKind::Sphere2:
      os << "sphere2(R=" << radius_ << ")";
      break;
  }
  return os.str();
}

void ManifoldModel::check_point(const Point& p) const {
  if (p.chart < 0 || p.chart >= chart_count()) throw ChartDomainError("invalid chart index");
  if (p.coords.size() != dim()) throw ChartDomainError("point has the wrong dimension");
  if (!p.coords.allFinite()) throw ChartDomainError("point coordinates are not finite");
  if (kind_ == ManifoldKind::Sphere2 && !(p.coords.norm() < kSphereChartLimit)) {
    throw ChartDomainError("sphere point outside its stereographic chart (|u| >= 2)");
  }
}

Point ManifoldModel::canonical(const Point& p) const {
  check_point(p);
  switch (kind_) {
    case ManifoldKind::Circle: {
      Point q = p;
      q.coords(0) = p.coords(0) - length_ * std::floor(p.coords(0) / length_);
      return q;
    }
    case ManifoldKind::FlatTorus: {
      Vector s = lattice_.lu().solve(p.coords);
      for (int i = 0; i < 2; ++i) s(i) -= std::floor(s(i));
      return Point{0, lattice_ * s};
    }
    case ManifoldKind::Sphere2:
      return p.coords.norm() <= 1.0 ? p : to_chart(p, 1 - p.chart);
  }
  return p;
}

Point ManifoldModel::to_chart(const Point& p, int chart) const {
  check_point(p);
  if (chart == p.chart) return p;
  if (kind_ != ManifoldKind::Sphere2 || chart < 0 || chart > 1) {
    throw ChartDomainError("requested chart does not exist");
  }
  const double r2 = p.coords.squaredNorm();
  if (r2 == 0.0) throw ChartDomainError("the chart origin is not covered by the other chart");
  Point q{chart, p.coords / r2};
  check_point(q);
  return q;
}

Matrix ManifoldModel::transition_jacobian(const Point& p, int chart) const {
  check_point(p);
  if (chart == p.chart) return Matrix::Identity(dim(), dim());
  to_chart(p, chart);
  const double r2 = p.coords.squaredNorm();
  return (Matrix::Identity(2, 2) * r2 - 2.0 * p.coords * p.coords.transpose()) / (r2 * r2);
}

Eigen::Vector3d ManifoldModel::ambient(const Point& p) const {
  if (kind_ != ManifoldKind::Sphere2) throw std::logic_error("ambient() is sphere-only");
  check_point(p);
  const auto x = detail::chart_to_ambient(p.chart, p.coords(0), p.coords(1));
  return {x[0], x[1], x[2]};
}

Point ManifoldModel::from_ambient(const Eigen::Vector3d& x) const {
  if (kind_ != ManifoldKind::Sphere2) throw std::logic_error("from_ambient() is sphere-only");
  const Eigen::Vector3d unit = x.normalized();
  const int chart = chart_for(unit(2));
  return Point{chart, chart_coords(detail::ambient_to_chart(chart, to_array(unit)))};
}

double ManifoldModel::transition_residual(int samples) const {
  if (kind_ != ManifoldKind::Sphere2) return 0.0;
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double r = 0.55 + 1.4 * (k + 0.5) / samples;
    const double t = 2.399963229728653 * k;
    Point p{0, Vector(2)};
    p.coords << r * std::cos(t), r * std::sin(t);
    for (int c = 0; c < 2; ++c) {
      Point q{c, p.coords};
      const Point back = to_chart(to_chart(q, 1 - c), c);
      worst = std::max(worst, (back.coords - q.coords).cwiseAbs().maxCoeff());
      const Eigen::Vector3d a = ambient(q);
      const Eigen::Vector3d b = ambient(to_chart(q, 1 - c));
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

VectorField::VectorField(ManifoldModel manifold, Evaluator evaluator, std::string label)
    : manifold_(std::move(manifold)), evaluator_(std::move(evaluator)), label_(std::move(label)) {}

FieldValue VectorField::evaluate(const Point& p) const {
  manifold_.check_point(p);
  return evaluator_(p);
}

VectorField VectorField::combination(const std::vector<VectorField>& fields, const Vector& coeffs,
                                     std::string label) {
  if (fields.empty() || static_cast<Eigen::Index>(fields.size()) != coeffs.size()) {
    throw std::invalid_argument("VectorField::combination: size mismatch");
  }
  const ManifoldModel m = fields.front().manifold();
  auto eval = [fields, coeffs, dim = m.dim()](const Point& p) {
    FieldValue out{Vector::Zero(dim), Matrix::Zero(dim, dim)};
    for (std::size_t a = 0; a < fields.size(); ++a) {
      const double c = coeffs(static_cast<Eigen::Index>(a));
      if (c == 0.0) continue;
      const FieldValue v = fields[a].evaluate(p);
      out.value += c * v.value;
      out.jacobian += c * v.jacobian;
    }
    return out;
  };
  return VectorField(m, eval, std::move(label));
}

VectorField torus_constant_field(const ManifoldModel& torus, const Vector& v) {
  if (torus.kind() == ManifoldKind::Sphere2 || v.size() != torus.dim()) {
    throw std::invalid_argument("torus_constant_field: needs a flat model and a matching vector");
  }
  const int dim = torus.dim();
  return VectorField(
      torus, [v, dim](const Point&) { return FieldValue{v, Matrix::Zero(dim, dim)}; }, "constant");
}

VectorField torus_fourier_field(const ManifoldModel& torus, int direction,
                                const Eigen::VectorXi& mode, bool sine) {
  if (torus.kind() != ManifoldKind::FlatTorus || mode.size() != 2 || direction < 0 || direction > 1) {
    throw std::invalid_argument("torus_fourier_field: bad arguments");
  }
  const Vector wave = 2.0 * std::numbers::pi * (torus.lattice().inverse().transpose() * mode.cast<double>());
  std::ostringstream label;
  label << (sine ? "sin" : "cos") << '(' << mode(0) << ',' << mode(1) << ")*e" << direction;
  return VectorField(
      torus,
      [wave, direction, sine](const Point& p) {
        const double phase = wave.dot(p.coords);
        const double m = sine ? std::sin(phase) : std::cos(phase);
        const double dm = sine ? std::cos(phase) : -std::sin(phase);
        FieldValue out{Vector::Zero(2), Matrix::Zero(2, 2)};
        out.value(direction) = m;
        out.jacobian.row(direction) = dm * wave.transpose();
        return out;
      },
      label.str());
}

VectorField sphere_ambient_field(const ManifoldModel& sphere, std::vector<AmbientTerm> terms,
                                 std::string label) {
  if (sphere.kind() != ManifoldKind::Sphere2) {
    throw std::invalid_argument("sphere_ambient_field: needs the sphere model");
  }
  return VectorField(
      sphere,
      [terms = std::move(terms)](const Point& p) {
        const auto u = detail::seed(p.coords);
        const auto x = detail::chart_to_ambient(p.chart, u[0], u[1]);
        std::array<Ad2, 3> v{Ad2(0.0, Eigen::Vector2d::Zero()), Ad2(0.0, Eigen::Vector2d::Zero()),
                             Ad2(0.0, Eigen::Vector2d::Zero())};
        for (const auto& t : terms) {
          v[static_cast<std::size_t>(t.component)] += t.coeff * detail::monomial(x, t.powers);
        }
        const Ad2 radial = v[0] * x[0] + v[1] * x[1] + v[2] * x[2];
        for (std::size_t i = 0; i < 3; ++i) v[i] -= radial * x[i];
        return from_ad(detail::push_to_chart(p.chart, x, v));
      },
      std::move(label));
}

VectorField sphere_rotation_field(const ManifoldModel& sphere, int axis) {
  // e_k x X: components (e_k x X)_i = eps_{kji} X_j.
  const int i1 = (axis + 1) % 3;
  const int i2 = (axis + 2) % 3;
  std::array<int, 3> p1{0, 0, 0}, p2{0, 0, 0};
  p1[static_cast<std::size_t>(i1)] = 1;
  p2[static_cast<std::size_t>(i2)] = 1;
  return sphere_ambient_field(sphere, {AmbientTerm{i1, p2, -1.0}, AmbientTerm{i2, p1, 1.0}},
                              "rot" + std::to_string(axis));
}

VectorField sphere_gradient_field(const ManifoldModel& sphere, int axis) {
  return sphere_ambient_field(sphere, {AmbientTerm{axis, {0, 0, 0}, 1.0}},
                              "grad" + std::to_string(axis));
}

VectorField sphere_mobius_translation_field(const ManifoldModel& sphere, double b) {
  // Chart-0 field b d/dz = b (grad X1 - e2 x X); e2 x X = (X3, 0, -X1).
  return sphere_ambient_field(sphere,
                              {AmbientTerm{0, {0, 0, 0}, b}, AmbientTerm{0, {0, 0, 1}, -b},
                               AmbientTerm{2, {1, 0, 0}, b}},
                              "mobius-translation");
}

Diffeomorphism::Diffeomorphism(ManifoldModel manifold, Map map, Differential differential,
                               std::string label)
    : manifold_(std::move(manifold)),
      map_(std::move(map)),
      differential_(std::move(differential)),
      label_(std::move(label)) {}

Diffeomorphism Diffeomorphism::torus_translation(const ManifoldModel& torus, const Vector& shift) {
  if (torus.kind() != ManifoldKind::FlatTorus || shift.size() != 2) {
    throw std::invalid_argument("torus_translation: needs the torus and a 2-vector");
  }
  return Diffeomorphism(
      torus,
      [torus, shift](const Point& p) {
        torus.check_point(p);
        return torus.canonical(Point{0, p.coords + shift});
      },
      [](const Point&) { return Matrix(Matrix::Identity(2, 2)); }, "translation");
}

Diffeomorphism Diffeomorphism::circle_rotation(const ManifoldModel& circle, double shift) {
  if (circle.kind() != ManifoldKind::Circle) throw std::invalid_argument("circle_rotation: needs the circle");
  return Diffeomorphism(
      circle,
      [circle, shift](const Point& p) {
        circle.check_point(p);
        Point q = p;
        q.coords(0) += shift;
        return circle.canonical(q);
      },
      [](const Point&) { return Matrix(Matrix::Identity(1, 1)); }, "rotation");
}

Diffeomorphism Diffeomorphism::sphere_rotation(const ManifoldModel& sphere, const Eigen::Vector3d& axis,
                                               double angle) {
  if (sphere.kind() != ManifoldKind::Sphere2) throw std::invalid_argument("sphere_rotation: needs the sphere");
  const Eigen::Matrix3d r = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  auto f = [r](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    std::array<T, 3> y;
    for (int i = 0; i < 3; ++i) {
      y[static_cast<std::size_t>(i)] = r(i, 0) * x[0] + r(i, 1) * x[1] + r(i, 2) * x[2];
    }
    return y;
  };
  return sphere_map(sphere, f, "rotation");
}

Diffeomorphism Diffeomorphism::sphere_mobius(const ManifoldModel& sphere, std::complex<double> a,
                                             std::complex<double> b, std::complex<double> c,
                                             std::complex<double> d) {
  if (sphere.kind() != ManifoldKind::Sphere2) throw std::invalid_argument("sphere_mobius: needs the sphere");
  if (std::abs(a * d - b * c) < 1e-14) throw std::invalid_argument("sphere_mobius: singular matrix");
  // Acts on homogeneous coordinates [p : q] of zeta = p / q recovered from X.
  auto f = [a, b, c, d](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    using C = detail::Cx<T>;
    // zeta = (X1 + i X2) / (1 - X3) = [X1 + i X2 : 1 - X3] ~ [1 + X3 : X1 - i X2].
    const bool south = x[2] <= T(0.0);
    const C p = south ? C{x[0], x[1]} : C{T(1.0) + x[2], T(0.0)};
    const C q = south ? C{T(1.0) - x[2], T(0.0)} : C{x[0], T(-1.0) * x[1]};
    const C ca{T(a.real()), T(a.imag())}, cb{T(b.real()), T(b.imag())};
    const C cc{T(c.real()), T(c.imag())}, cd{T(d.real()), T(d.imag())};
    const C pp = ca * p + cb * q;
    const C qq = cc * p + cd * q;
    const T n = detail::abs2(pp) + detail::abs2(qq);
    const C w = pp * detail::conj(qq);
    return std::array<T, 3>{T(2.0) * w.re / n, T(2.0) * w.im / n,
                            (detail::abs2(pp) - detail::abs2(qq)) / n};
  };
  return sphere_map(sphere, f, "mobius");
}

}  // namespace finsler
