#pragma once

#include <iosfwd>
#include <vector>

#include "finsler/norm.hpp"
#include "finsler/types.hpp"

namespace finsler {

/// Nodes on the indicatrix {F = 1} with weights approximating the volume
/// measure of the indicatrix in the Hessian metric of F.
struct IndicatrixQuadrature {
  std::vector<Vector> points;
  std::vector<double> weights;
  int resolution = 0;

  double total_weight() const;
};

/// Radially projects a reference-sphere grid onto {F = 1}:
///  - n = 1: the two points +-1/F(+-1), unit (counting) weights;
///  - n = 2: `resolution` equispaced angles, weight sqrt(g_y(y', y')) dtheta;
///  - n = 3: floor(sqrt(resolution))^2 latitude/longitude cell midpoints,
///           weight sqrt(det G) dtheta dphi with G the Hessian-metric Gram
///           matrix of (d_theta y, d_phi y).
/// Tangent vectors come from the analytic gradient of F when available and
/// from central differences in the grid angles (step 1e-5) otherwise.
/// Requires resolution >= 16 (n = 2) or >= 256 (n = 3).
IndicatrixQuadrature sample_indicatrix(const MinkowskiNorm& norm, int resolution);

/// Inner-product norm sqrt(u^T Q u) produced by averaging.
struct AveragedNorm {
  Matrix matrix;

  double operator()(const Vector& u) const;
  MinkowskiNorm as_norm() const { return MinkowskiNorm::euclidean(matrix); }
};

/// Q = sum_i w_i g_{y_i} / sum_i w_i, summed in node order.
AveragedNorm averaged_norm(const MinkowskiNorm& norm, const IndicatrixQuadrature& quadrature);
AveragedNorm averaged_norm(const MinkowskiNorm& norm, int resolution);

/// Max-abs entry of Q1 - c^2 l^T Q2 l, for norms with F1 = c F2 o l.
/// The hypothesis is sampled first (relative tolerance `hypothesis_tol`);
/// HypothesisViolated is thrown when it fails.
double verify_equivariance(const MinkowskiNorm& norm1, const MinkowskiNorm& norm2,
                           const Matrix& l, double c, int resolution,
                           double hypothesis_tol = 1e-9);

/// Averages at `resolution` and 2*resolution and their max-abs difference.
struct AveragingConvergence {
  int resolution = 0;
  AveragedNorm coarse;
  AveragedNorm fine;
  double total_weight_coarse = 0.0;
  double total_weight_fine = 0.0;
  double difference = 0.0;
};

AveragingConvergence averaging_convergence(const MinkowskiNorm& norm, int resolution);

/// Debug table: one line per node, coordinates then weight.
void write_quadrature_table(std::ostream& out, const IndicatrixQuadrature& quadrature);

}  // namespace finsler
