#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler/conformal_solver.hpp"
#include "finsler/experiments.hpp"
#include "finsler/finsler_field.hpp"
#include "finsler/lie_algebra.hpp"
#include "finsler/manifold.hpp"
#include "finsler/norm.hpp"

namespace finsler {

using nlohmann::json;

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

/// {"family": "euclidean", "dim": n, "Q": [[...]]} or
/// {"family": "randers", "dim": n, "a": [[...]], "b": [...]}.
/// Generic norms cannot be written; ConfigError.
json norm_to_json(const MinkowskiNorm& norm);
MinkowskiNorm norm_from_json(const json& j);

/// {"kind": "circle", "length": L} | {"kind": "torus", "lattice": [[...]]} |
/// {"kind": "sphere", "radius": R}
json manifold_to_json(const ManifoldModel& m);
ManifoldModel manifold_from_json(const json& j);

/// [{"mode": [k1, k2], "cos": a, "sin": b}, ...]
json fourier_terms_to_json(const std::vector<FourierTerm>& terms);
std::vector<FourierTerm> fourier_terms_from_json(const json& j);

/// Torus/circle: Fourier terms as above. Sphere: [{"powers": [p0, p1, p2], "coeff": c}, ...].
ScalarField scalar_field_from_json(const ManifoldModel& m, const json& j);

/// {"manifold": {...}, "metric": {"type": "constant", "norm": {...}} |
///  {"type": "round"}, "rho": [...] (optional conformal factor)}
FinslerField field_from_json(const json& j);

/// {"dim": n, "entries": [[i, j, k, value], ...]}
json lie_algebra_to_json(const LieAlgebra& algebra, double drop_below = 0.0);
LieAlgebra lie_algebra_from_json(const json& j);

json solve_report_to_json(const SolveReport& report);

json config_to_json(const ExperimentConfig& config);
/// Fields missing from `j` keep their values from `defaults`.
ExperimentConfig config_from_json(const json& j, const ExperimentConfig& defaults = {});

/// Non-finite values become strings ("inf", "-inf", "nan") so documents stay valid JSON.
json number_to_json(double v);

}  // namespace finsler
