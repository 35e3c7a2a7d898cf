#include "finsler/averaging.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

constexpr double kAngleStep = 1e-5;

// y(u) = u / F(u) and its derivative along du.
Vector project(const MinkowskiNorm& norm, const Vector& u) { return u / norm(u); }

Vector projected_derivative(const MinkowskiNorm& norm, const Vector& u, const Vector& du) {
  const double f = norm(u);
  const Vector grad = norm.gradient(u);
  return du / f - u * (grad.dot(du) / (f * f));
}

Vector circle_point(double t) {
  Vector u(2);
  u << std::cos(t), std::sin(t);
  return u;
}

Vector sphere_point(double theta, double phi) {
  Vector u(3);
  u << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
  return u;
}

}  // namespace

double IndicatrixQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

IndicatrixQuadrature sample_indicatrix(const MinkowskiNorm& norm, int resolution) {
  IndicatrixQuadrature q;
  q.resolution = resolution;
  const int dim = norm.dim();
  const bool analytic = norm.has_analytic_gradient();

  if (dim == 1) {
    for (double s : {1.0, -1.0}) {
      Vector u(1);
      u(0) = s;
      q.points.push_back(project(norm, u));
      q.weights.push_back(1.0);
    }
    return q;
  }

  if (dim == 2) {
    if (resolution < 16) throw std::invalid_argument("sample_indicatrix: resolution must be >= 16 for n = 2");
    const double dt = 2.0 * std::numbers::pi / resolution;
    q.points.reserve(static_cast<std::size_t>(resolution));
    q.weights.reserve(static_cast<std::size_t>(resolution));
    for (int k = 0; k < resolution; ++k) {
      const double t = k * dt;
      const Vector u = circle_point(t);
      const Vector y = project(norm, u);
      Vector dy;
      if (analytic) {
        Vector du(2);
        du << -std::sin(t), std::cos(t);
        dy = projected_derivative(norm, u, du);
      } else {
        dy = (project(norm, circle_point(t + kAngleStep)) -
              project(norm, circle_point(t - kAngleStep))) /
             (2.0 * kAngleStep);
      }
      const auto g = fundamental_tensor(norm, y);
      q.points.push_back(y);
      q.weights.push_back(std::sqrt(g(dy, dy)) * dt);
    }
    return q;
  }

  if (dim == 3) {
    if (resolution < 256) throw std::invalid_argument("sample_indicatrix: resolution must be >= 256 for n = 3");
    const int m = static_cast<int>(std::floor(std::sqrt(static_cast<double>(resolution))));
    const double dtheta = std::numbers::pi / m;
    const double dphi = 2.0 * std::numbers::pi / m;
    for (int i = 0; i < m; ++i) {
      const double theta = (i + 0.5) * dtheta;
      for (int j = 0; j < m; ++j) {
        const double phi = j * dphi;
        const Vector u = sphere_point(theta, phi);
        const Vector y = project(norm, u);
        Vector dy_theta, dy_phi;
        if (analytic) {
          Vector du_theta(3), du_phi(3);
          du_theta << std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta);
          du_phi << -std::sin(theta) * std::sin(phi), std::sin(theta) * std::cos(phi), 0.0;
          dy_theta = projected_derivative(norm, u, du_theta);
          dy_phi = projected_derivative(norm, u, du_phi);
        } else {
          dy_theta = (project(norm, sphere_point(theta + kAngleStep, phi)) -
                      project(norm, sphere_point(theta - kAngleStep, phi))) /
                     (2.0 * kAngleStep);
          dy_phi = (project(norm, sphere_point(theta, phi + kAngleStep)) -
                    project(norm, sphere_point(theta, phi - kAngleStep))) /
                   (2.0 * kAngleStep);
        }
        const auto g = fundamental_tensor(norm, y);
        const double g11 = g(dy_theta, dy_theta);
        const double g12 = g(dy_theta, dy_phi);
        const double g22 = g(dy_phi, dy_phi);
        q.points.push_back(y);
        q.weights.push_back(std::sqrt(std::max(0.0, g11 * g22 - g12 * g12)) * dtheta * dphi);
      }
    }
    return q;
  }

  throw std::invalid_argument("sample_indicatrix: only dimensions 1..3 are supported");
}

double AveragedNorm::operator()(const Vector& u) const {
  return std::sqrt(std::max(0.0, u.dot(matrix * u)));
}

AveragedNorm averaged_norm(const MinkowskiNorm& norm, const IndicatrixQuadrature& quadrature) {
  const int dim = norm.dim();
  Matrix sum = Matrix::Zero(dim, dim);
  double total = 0.0;
  for (std::size_t i = 0; i < quadrature.points.size(); ++i) {
    sum += quadrature.weights[i] * fundamental_tensor(norm, quadrature.points[i]).matrix;
    total += quadrature.weights[i];
  }
  if (!(total > 0.0)) throw std::invalid_argument("averaged_norm: quadrature has no mass");
  Matrix q = sum / total;
  return AveragedNorm{0.5 * (q + q.transpose())};
}

AveragedNorm averaged_norm(const MinkowskiNorm& norm, int resolution) {
  return averaged_norm(norm, sample_indicatrix(norm, resolution));
}

double verify_equivariance(const MinkowskiNorm& norm1, const MinkowskiNorm& norm2,
                           const Matrix& l, double c, int resolution, double hypothesis_tol) {
  const int dim = norm1.dim();
  if (norm2.dim() != dim || l.rows() != dim || l.cols() != dim) {
    throw std::invalid_argument("verify_equivariance: dimension mismatch");
  }
  const int probes = 64;
  for (int k = 0; k < probes; ++k) {
    Vector y(dim);
    for (int i = 0; i < dim; ++i) y(i) = std::cos(0.7 * k * (i + 1) + 0.3 * i);
    if (y.norm() < 1e-6) continue;
    const double lhs = norm1(y);
    const double rhs = c * norm2(Vector(l * y));
    if (std::abs(lhs - rhs) > hypothesis_tol * std::max(lhs, 1e-300)) {
      std::ostringstream os;
      os << "F1 != c F2 o l at a sampled vector (|diff| = " << std::abs(lhs - rhs) << ")";
      throw HypothesisViolated(os.str());
    }
  }
  const Matrix q1 = averaged_norm(norm1, resolution).matrix;
  const Matrix q2 = averaged_norm(norm2, resolution).matrix;
  return (q1 - c * c * (l.transpose() * q2 * l)).cwiseAbs().maxCoeff();
}

AveragingConvergence averaging_convergence(const MinkowskiNorm& norm, int resolution) {
  AveragingConvergence out;
  out.resolution = resolution;
  const auto coarse = sample_indicatrix(norm, resolution);
  const auto fine = sample_indicatrix(norm, norm.dim() == 3 ? 4 * resolution : 2 * resolution);
  out.coarse = averaged_norm(norm, coarse);
  out.fine = averaged_norm(norm, fine);
  out.total_weight_coarse = coarse.total_weight();
  out.total_weight_fine = fine.total_weight();
  out.difference = (out.coarse.matrix - out.fine.matrix).cwiseAbs().maxCoeff();
  return out;
}

void write_quadrature_table(std::ostream& out, const IndicatrixQuadrature& quadrature) {
  out << std::setprecision(17);
  if (!quadrature.points.empty()) {
    for (int j = 0; j < quadrature.points.front().size(); ++j) out << 'y' << j << ',';
    out << "weight\n";
  }
  for (std::size_t i = 0; i < quadrature.points.size(); ++i) {
    const Vector& p = quadrature.points[i];
    for (int j = 0; j < p.size(); ++j) out << p(j) << ',';
    out << quadrature.weights[i] << '\n';
  }
}

}  // namespace finsler
