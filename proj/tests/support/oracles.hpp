#pragma once

// Reference computations for the test suites. Nothing here calls into the
// library; every oracle works from norm values or flows written out
// directly, so agreement with the library is evidence rather than echo.

#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using NormFn = std::function<double(const Vec&)>;

inline double randers(const Mat& a, const Vec& b, const Vec& y) {
  return std::sqrt(y.dot(a * y)) + b.dot(y);
}

// Fourth-order central differences of F^2/2.
inline Mat half_square_hessian(const NormFn& f, const Vec& y, double h) {
  const auto n = y.size();
  auto e = [&](const Vec& v) {
    const double fv = f(v);
    return 0.5 * fv * fv;
  };
  Mat hess(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Vec ei = Vec::Zero(n);
      Vec ej = Vec::Zero(n);
      ei(i) = h;
      ej(j) = h;
      // mixed 4th-order stencil on the (i, j) plane
      double s = 0.0;
      const int w[4] = {-1, 8, -8, 1};
      const int o[4] = {2, 1, -1, -2};
      for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < 4; ++q) {
          s += w[p] * w[q] * e(y + o[p] * ei + o[q] * ej);
        }
      }
      hess(i, j) = s / (144.0 * h * h);
    }
  }
  return 0.5 * (hess + hess.transpose());
}

// Textbook Randers fundamental tensor:
// g_ij = (F/alpha)(a_ij - l_i l_j) + F_i F_j,  l = a y / alpha,  F_i = l_i + b_i.
inline Mat randers_tensor(const Mat& a, const Vec& b, const Vec& y) {
  const double alpha = std::sqrt(y.dot(a * y));
  const Vec l = a * y / alpha;
  const double f = alpha + b.dot(y);
  const Vec fi = l + b;
  return (f / alpha) * (a - l * l.transpose()) + fi * fi.transpose();
}

// Averaged inner product of a planar Randers norm by composite Simpson in
// the angle of the radial parametrization. Tangents of the indicatrix come
// from a 4th-order difference in the angle.
inline Mat averaged_randers_2d(const Mat& a, const Vec& b, int intervals) {
  auto point = [&](double t) {
    Vec u(2);
    u << std::cos(t), std::sin(t);
    return Vec(u / randers(a, b, u));
  };
  const double h = 2.0 * std::numbers::pi / intervals;
  const double dt = 1e-3;
  Mat acc = Mat::Zero(2, 2);
  double total = 0.0;
  for (int k = 0; k <= intervals; ++k) {
    const double t = k * h;
    const Vec y = point(t);
    const Vec yp = (-point(t + 2 * dt) + 8 * point(t + dt) - 8 * point(t - dt) + point(t - 2 * dt)) / (12 * dt);
    const Mat g = randers_tensor(a, b, y);
    const double w = std::sqrt(yp.dot(g * yp)) * ((k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0));
    acc += w * g;
    total += w;
  }
  return acc / total;
}

// Length of the unit ellipse {y^T q y = 1} measured in the metric q, by a
// fine inscribed polygon.
inline double ellipse_length_in_metric(const Mat& q, int segments) {
  auto point = [&](double t) {
    Vec u(2);
    u << std::cos(t), std::sin(t);
    return Vec(u / std::sqrt(u.dot(q * u)));
  };
  double len = 0.0;
  for (int k = 0; k < segments; ++k) {
    const Vec d = point(2.0 * std::numbers::pi * (k + 1) / segments) - point(2.0 * std::numbers::pi * k / segments);
    len += std::sqrt(d.dot(q * d));
  }
  return len;
}

// sup F(u)/F(-u) over `n` equispaced unit directions.
inline double brute_reversibility(const NormFn& f, int n) {
  double best = 0.0;
  for (int k = 0; k < n; ++k) {
    Vec u(2);
    const double t = 2.0 * std::numbers::pi * k / n;
    u << std::cos(t), std::sin(t);
    best = std::max(best, f(u) / f(-u));
  }
  return best;
}

// Unit-sphere stereographic coordinates, chart 0: projection from the north
// pole, u = 0 at the south pole.
inline Eigen::Vector3d sphere_from_chart0(const Vec& u) {
  const double r2 = u.squaredNorm();
  return Eigen::Vector3d(2 * u(0), 2 * u(1), r2 - 1) / (r2 + 1);
}

inline Vec chart0_from_sphere(const Eigen::Vector3d& x) {
  Vec u(2);
  u << x(0) / (1 - x(2)), x(1) / (1 - x(2));
  return u;
}

inline double round_metric_chart0(double radius, const Vec& u, const Vec& y) {
  return 2 * radius * y.norm() / (1 + u.squaredNorm());
}

using Flow = std::function<Vec(const Vec&, double)>;
using ChartMetric = std::function<double(const Vec&, const Vec&)>;

// d phi_t (x) y by a 4th-order difference along y. A 2nd-order stencil
// leaves ~1e-10 of roundoff, which the t-difference then amplifies.
inline Vec push_direction(const Flow& phi, const Vec& x, const Vec& y, double t) {
  const double s = 1e-4;
  return (-phi(x + 2 * s * y, t) + 8 * phi(x + s * y, t) - 8 * phi(x - s * y, t) + phi(x - 2 * s * y, t)) / (12 * s);
}

// (L_V F)(x, y) from the flow: d/dt F(phi_t x, d phi_t y) at t = 0 by a
// central difference in t.
inline double flow_lie_derivative(const ChartMetric& f, const Flow& phi, const Vec& x, const Vec& y, double t) {
  auto moved = [&](double tt) { return f(phi(x, tt), push_direction(phi, x, y, tt)); };
  return (moved(t) - moved(-t)) / (2 * t);
}

// One-sided version, (phi_t^* F - F)/t, for first-order agreement checks.
inline double flow_difference_quotient(const ChartMetric& f, const Flow& phi, const Vec& x, const Vec& y, double t) {
  return (f(phi(x, t), push_direction(phi, x, y, t)) - f(x, y)) / t;
}

// Rotation by angle t about coordinate axis k, acting on chart-0 points.
inline Vec rotate_chart0(const Vec& u, int axis, double t) {
  const Eigen::Vector3d x = sphere_from_chart0(u);
  const Eigen::Matrix3d r = Eigen::AngleAxisd(t, Eigen::Vector3d::Unit(axis)).toRotationMatrix();
  return chart0_from_sphere(r * x);
}

// Flow of the ambient field e_k - X_k X (gradient of X_k), RK4 in ambient
// coordinates with renormalization.
inline Vec gradient_flow_chart0(const Vec& u, int axis, double t) {
  Eigen::Vector3d x = sphere_from_chart0(u);
  const int steps = 200;
  const double h = t / steps;
  auto rhs = [&](const Eigen::Vector3d& p) {
    return Eigen::Vector3d(Eigen::Vector3d::Unit(axis) - p(axis) * p);
  };
  for (int i = 0; i < steps; ++i) {
    const Eigen::Vector3d k1 = rhs(x);
    const Eigen::Vector3d k2 = rhs(x + 0.5 * h * k1);
    const Eigen::Vector3d k3 = rhs(x + 0.5 * h * k2);
    const Eigen::Vector3d k4 = rhs(x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    x.normalize();
  }
  return chart0_from_sphere(x);
}

// [A X, B X] for linear ambient fields: B A X - A B X.
inline Eigen::Matrix3d linear_field_bracket(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  return b * a - a * b;
}

inline Eigen::Matrix3d cross_matrix(int axis) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  const Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
  m << 0, -e(2), e(1), e(2), 0, -e(0), -e(1), e(0), 0;
  return m;
}

}  // namespace oracle
