// Stereographic chart formulas shared by the sphere code paths. Templated on
// the scalar so the same expressions serve values and AutoDiff Jacobians.
#pragma once

#include <array>
#include <unsupported/Eigen/AutoDiff>

#include "finsler/types.hpp"

namespace finsler::detail {

using Ad2 = Eigen::AutoDiffScalar<Eigen::Vector2d>;

// Chart 0 projects from the north pole, chart 1 from the south pole.
template <class T>
std::array<T, 3> chart_to_ambient(int chart, const T& u, const T& v) {
  const T s = u * u + v * v;
  const T d = T(1.0) + s;
  const T x3 = chart == 0 ? T((s - T(1.0)) / d) : T((T(1.0) - s) / d);
  return {T(2.0) * u / d, T(2.0) * v / d, x3};
}

template <class T>
std::array<T, 2> ambient_to_chart(int chart, const std::array<T, 3>& x) {
  const T den = chart == 0 ? T(T(1.0) - x[2]) : T(T(1.0) + x[2]);
  return {x[0] / den, x[1] / den};
}

// Differential of the chart map applied to an ambient tangent vector.
template <class T>
std::array<T, 2> push_to_chart(int chart, const std::array<T, 3>& x, const std::array<T, 3>& v) {
  if (chart == 0) {
    const T den = T(1.0) - x[2];
    const T den2 = den * den;
    return {v[0] / den + x[0] * v[2] / den2, v[1] / den + x[1] * v[2] / den2};
  }
  const T den = T(1.0) + x[2];
  const T den2 = den * den;
  return {v[0] / den - x[0] * v[2] / den2, v[1] / den - x[1] * v[2] / den2};
}

template <class T>
T monomial(const std::array<T, 3>& x, const std::array<int, 3>& powers) {
  T out(1.0);
  for (int i = 0; i < 3; ++i) {
    for (int p = 0; p < powers[static_cast<std::size_t>(i)]; ++p) out = out * x[static_cast<std::size_t>(i)];
  }
  return out;
}

inline std::array<Ad2, 2> seed(const Vector& u) {
  return {Ad2(u(0), 2, 0), Ad2(u(1), 2, 1)};
}

// Minimal complex arithmetic over a generic real scalar.
template <class T>
struct Cx {
  T re, im;
};

template <class T>
Cx<T> operator+(const Cx<T>& a, const Cx<T>& b) { return {a.re + b.re, a.im + b.im}; }
template <class T>
Cx<T> operator*(const Cx<T>& a, const Cx<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T>
Cx<T> conj(const Cx<T>& a) { return {a.re, T(-1.0) * a.im}; }
template <class T>
T abs2(const Cx<T>& a) { return a.re * a.re + a.im * a.im; }

}  // namespace finsler::detail
