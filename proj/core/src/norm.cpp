#include "finsler/norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_spd(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidNorm(std::string(what) + " must be a nonempty square matrix");
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw InvalidNorm(std::string(what) + " must be symmetric");
  }
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw InvalidNorm(std::string(what) + " must be positive definite");
  }
}

double half_square(const MinkowskiNorm& n, const Vector& y) {
  const double f = n(y);
  return 0.5 * f * f;
}

Matrix fd_half_square_hessian(const MinkowskiNorm& n, const Vector& y,
                              double rel_step) {
  const int dim = n.dim();
  const double h = rel_step * y.norm();
  Matrix g(dim, dim);
  const double f0 = half_square(n, y);
  for (int i = 0; i < dim; ++i) {
    Vector yp = y, ym = y;
    yp(i) += h;
    ym(i) -= h;
    g(i, i) = (half_square(n, yp) - 2.0 * f0 + half_square(n, ym)) / (h * h);
    for (int j = 0; j < i; ++j) {
      Vector ypp = yp, ypm = yp, ymp = ym, ymm = ym;
      ypp(j) += h;
      ypm(j) -= h;
      ymp(j) += h;
      ymm(j) -= h;
      const double v = (half_square(n, ypp) - half_square(n, ypm) -
                        half_square(n, ymp) + half_square(n, ymm)) /
                       (4.0 * h * h);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

Vector fd_gradient(const MinkowskiNorm& n, const Vector& y) {
  const double h = 1e-6 * std::max(y.norm(), std::numeric_limits<double>::min());
  Vector g(n.dim());
  for (int i = 0; i < n.dim(); ++i) {
    Vector yp = y, ym = y;
    yp(i) += h;
    ym(i) -= h;
    g(i) = (n(yp) - n(ym)) / (2.0 * h);
  }
  return g;
}

Matrix randers_tensor(const RandersParams& p, const Vector& y) {
  const Vector ay = p.a * y;
  const double alpha = std::sqrt(y.dot(ay));
  const double f = alpha + p.b.dot(y);
  const Matrix hess_alpha = (p.a - ay * ay.transpose() / (alpha * alpha)) / alpha;
  const Vector grad = ay / alpha + p.b;
  return f * hess_alpha + grad * grad.transpose();
}

std::vector<Vector> sample_directions(int dim, int samples, std::uint64_t seed) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < dim && static_cast<int>(out.size()) < samples; ++i) {
    out.push_back(Vector::Unit(dim, i));
    if (static_cast<int>(out.size()) < samples) out.push_back(-Vector::Unit(dim, i));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  while (static_cast<int>(out.size()) < samples) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
    const double len = v.norm();
    if (len > 1e-12) out.push_back(v / len);
  }
  return out;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return std::max({fc, fd, f(0.5 * (lo + hi))});
}

}  // namespace

MinkowskiNorm::MinkowskiNorm(int dim, Params params)
    : dim_(dim), params_(std::move(params)) {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const Vector e = Vector::Unit(dim_, i);
    s = std::max({s, (*this)(e), (*this)(Vector(-e))});
  }
  scale_ = s > 0.0 ? s : 1.0;
}

MinkowskiNorm MinkowskiNorm::euclidean(Matrix q) {
  require_spd(q, "Euclidean Q");
  const int dim = static_cast<int>(q.rows());
  return MinkowskiNorm(dim, EuclideanParams{std::move(q)});
}

MinkowskiNorm MinkowskiNorm::randers(Matrix a, Vector b) {
  require_spd(a, "Randers a");
  if (b.size() != a.rows()) {
    throw InvalidNorm("Randers b has the wrong dimension");
  }
  const double dual = std::sqrt(b.dot(a.llt().solve(b)));
  if (!(dual < 1.0)) {
    std::ostringstream os;
    os << "Randers b is inadmissible: a-dual length " << dual << " >= 1";
    throw InvalidNorm(os.str());
  }
  const int dim = static_cast<int>(a.rows());
  return MinkowskiNorm(dim, RandersParams{std::move(a), std::move(b)});
}

MinkowskiNorm MinkowskiNorm::generic(int dim, GenericParams params) {
  if (dim < 1) throw InvalidNorm("generic norm needs dim >= 1");
  if (!params.value) throw InvalidNorm("generic norm needs a value function");
  return MinkowskiNorm(dim, std::move(params));
}

NormFamily MinkowskiNorm::family() const noexcept {
  switch (params_.index()) {
    case 0:
      return NormFamily::Euclidean;
    case 1:
      return NormFamily::Randers;
    default:
      return NormFamily::Generic;
  }
}

bool MinkowskiNorm::has_analytic_gradient() const noexcept {
  if (const auto* g = std::get_if<GenericParams>(&params_)) {
    return static_cast<bool>(g->gradient);
  }
  return true;
}

bool MinkowskiNorm::has_analytic_hessian() const noexcept {
  if (const auto* g = std::get_if<GenericParams>(&params_)) {
    return static_cast<bool>(g->hessian);
  }
  return true;
}

double MinkowskiNorm::operator()(const Vector& y) const {
  return std::visit(
      Overloaded{
          [&](const EuclideanParams& p) { return std::sqrt(std::max(0.0, y.dot(p.q * y))); },
          [&](const RandersParams& p) {
            const double alpha = std::sqrt(std::max(0.0, y.dot(p.a * y)));
            return alpha == 0.0 ? 0.0 : alpha + p.b.dot(y);
          },
          [&](const GenericParams& p) { return p.value(y); },
      },
      params_);
}

Vector MinkowskiNorm::gradient(const Vector& y) const {
  return std::visit(
      Overloaded{
          [&](const EuclideanParams& p) -> Vector {
            const Vector qy = p.q * y;
            return qy / std::sqrt(y.dot(qy));
          },
          [&](const RandersParams& p) -> Vector {
            const Vector ay = p.a * y;
            return ay / std::sqrt(y.dot(ay)) + p.b;
          },
          [&](const GenericParams& p) -> Vector {
            return p.gradient ? p.gradient(y) : fd_gradient(*this, y);
          },
      },
      params_);
}

MinkowskiNorm compose_linear(const MinkowskiNorm& norm, const Matrix& l, double c) {
  if (l.rows() != norm.dim() || l.cols() != norm.dim()) {
    throw InvalidNorm("compose_linear: l has the wrong shape");
  }
  if (!(c > 0.0)) throw InvalidNorm("compose_linear: c must be positive");
  return std::visit(
      Overloaded{
          [&](const EuclideanParams& p) {
            return MinkowskiNorm::euclidean(c * c * (l.transpose() * p.q * l));
          },
          [&](const RandersParams& p) {
            Matrix a = c * c * (l.transpose() * p.a * l);
            a = 0.5 * (a + a.transpose());
            return MinkowskiNorm::randers(a, c * (l.transpose() * p.b));
          },
          [&](const GenericParams& p) {
            GenericParams q;
            q.label = p.label + "-composed";
            q.value = [f = p.value, l, c](const Vector& y) { return c * f(l * y); };
            if (p.gradient) {
              q.gradient = [g = p.gradient, l, c](const Vector& y) -> Vector {
                return c * (l.transpose() * g(l * y));
              };
            }
            if (p.hessian) {
              q.hessian = [h = p.hessian, l, c](const Vector& y) -> Matrix {
                return c * (l.transpose() * h(l * y) * l);
              };
            }
            return MinkowskiNorm::generic(norm.dim(), std::move(q));
          },
      },
      norm.params());
}

FundamentalTensor fundamental_tensor(const MinkowskiNorm& norm, const Vector& y,
                                     const TensorOptions& options) {
  if (y.size() != norm.dim()) {
    throw InvalidNorm("fundamental_tensor: vector has the wrong dimension");
  }
  if (!(y.norm() * norm.scale() >= options.degenerate_floor)) {
    throw DegenerateInput("fundamental tensor requested at (numerically) y = 0");
  }
  Matrix g;
  const bool analytic = options.scheme == DiffScheme::Analytic && norm.has_analytic_hessian();
  if (!analytic) {
    g = fd_half_square_hessian(norm, y, options.fd_step);
  } else {
    g = std::visit(
        Overloaded{
            [&](const EuclideanParams& p) -> Matrix { return p.q; },
            [&](const RandersParams& p) -> Matrix { return randers_tensor(p, y); },
            [&](const GenericParams& p) -> Matrix {
              const Vector grad = norm.gradient(y);
              return norm(y) * p.hessian(y) + grad * grad.transpose();
            },
        },
        norm.params());
  }
  g = 0.5 * (g + g.transpose());

  if (options.require_positive_definite) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > options.definiteness_tol * std::max(hi, 0.0)) || !(lo > 0.0)) {
      std::ostringstream os;
      os << "fundamental tensor is not positive definite (eigenvalue " << lo << ")";
      throw ConvexityViolation(os.str(), lo);
    }
  }
  return FundamentalTensor{y, std::move(g)};
}

AxiomReport check_axioms(const MinkowskiNorm& norm, int samples, std::uint64_t seed,
                         const AxiomTolerances& tol) {
  if (samples < 1) throw std::invalid_argument("check_axioms: samples must be >= 1");
  AxiomReport report;
  const auto dirs = sample_directions(norm.dim(), samples, seed);
  report.samples = static_cast<int>(dirs.size());
  report.min_value = std::numeric_limits<double>::infinity();
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  report.max_eigenvalue = 0.0;

  TensorOptions topt;
  topt.fd_step = tol.fd_step;
  topt.require_positive_definite = false;
  constexpr double kLambdas[] = {0.5, 2.0, 7.0};

  for (const Vector& u : dirs) {
    const double f = norm(u);
    report.min_value = std::min(report.min_value, f);
    for (double lambda : kLambdas) {
      const double ref = lambda * f;
      const double res = std::abs(norm(Vector(lambda * u)) - ref) /
                         std::max(std::abs(ref), std::numeric_limits<double>::min());
      report.max_homogeneity_residual = std::max(report.max_homogeneity_residual, res);
    }
    if (!(f > 0.0)) continue;
    const auto g = fundamental_tensor(norm, u, topt);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g.matrix, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < report.min_eigenvalue) {
      report.min_eigenvalue = lo;
      report.worst_direction = u;
    }
    report.max_eigenvalue = std::max(report.max_eigenvalue, es.eigenvalues().maxCoeff());
  }

  report.positive = report.min_value > 0.0;
  report.homogeneous = report.max_homogeneity_residual <= tol.homogeneity;
  report.strongly_convex =
      report.min_eigenvalue > tol.eigenvalue * report.max_eigenvalue && report.min_eigenvalue > 0.0;
  if (!report.positive) report.failures.push_back("regularity: F vanishes on a nonzero sample");
  if (!report.homogeneous) report.failures.push_back("positive 1-homogeneity residual above tolerance");
  if (!report.strongly_convex) report.failures.push_back("fundamental tensor not positive definite");
  report.passed = report.failures.empty();
  return report;
}

double reversibility_sup(const MinkowskiNorm& norm, int resolution) {
  if (resolution < 8) throw std::invalid_argument("reversibility_sup: resolution must be >= 8");
  const int dim = norm.dim();
  auto ratio = [&](const Vector& u) { return norm(u) / norm(Vector(-u)); };

  if (dim == 1) {
    const Vector e = Vector::Ones(1);
    const double r = ratio(e);
    return std::max(r, 1.0 / r);
  }

  if (dim == 2) {
    const double step = 2.0 * std::numbers::pi / resolution;
    auto r_at = [&](double t) {
      Vector u(2);
      u << std::cos(t), std::sin(t);
      return ratio(u);
    };
    int kmax = 0;
    double rmax = -1.0;
    for (int k = 0; k < resolution; ++k) {
      const double r = r_at(k * step);
      if (r > rmax) {
        rmax = r;
        kmax = k;
      }
    }
    const double t0 = kmax * step;
    rmax = std::max(rmax, golden_max(r_at, t0 - step, t0 + step));
    // r(-u) = 1/r(u): the maximum over the circle already dominates 1/min.
    return std::max(rmax, 1.0 / rmax);
  }

  // Higher dimensions: Fibonacci-style grid for n = 3, seeded directions above.
  double rmax = 1.0;
  const int count = resolution * resolution;
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vector u(3);
      u << r * std::cos(golden * i), r * std::sin(golden * i), z;
      const double q = ratio(u);
      rmax = std::max({rmax, q, 1.0 / q});
    }
  } else {
    for (const Vector& u : sample_directions(dim, count, 0x5eed)) {
      const double q = ratio(u);
      rmax = std::max({rmax, q, 1.0 / q});
    }
  }
  return rmax;
}

}  // namespace finsler
