#include "finsler/serialization.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  return guarded("matrix", [&] {
    if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const json& row = j.at(static_cast<std::size_t>(i));
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ConfigError("ragged matrix");
      for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
  });
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_to_json(v(i)));
  return out;
}

Vector vector_from_json(const json& j) {
  return guarded("vector", [&] {
    if (!j.is_array()) throw ConfigError("vector must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
  });
}

json norm_to_json(const MinkowskiNorm& norm) {
  json out;
  out["dim"] = norm.dim();
  if (const auto* e = std::get_if<EuclideanParams>(&norm.params())) {
    out["family"] = "euclidean";
    out["Q"] = matrix_to_json(e->q);
  } else if (const auto* r = std::get_if<RandersParams>(&norm.params())) {
    out["family"] = "randers";
    out["a"] = matrix_to_json(r->a);
    out["b"] = vector_to_json(r->b);
  } else {
    throw ConfigError("generic norms have no serialized form");
  }
  return out;
}

MinkowskiNorm norm_from_json(const json& j) {
  return guarded("norm", [&] {
    const std::string family = j.at("family").get<std::string>();
    MinkowskiNorm norm = [&] {
      if (family == "euclidean") return MinkowskiNorm::euclidean(matrix_from_json(j.at("Q")));
      if (family == "randers") return MinkowskiNorm::randers(matrix_from_json(j.at("a")), vector_from_json(j.at("b")));
      throw ConfigError("unknown norm family '" + family + "'");
    }();
    if (j.contains("dim") && j.at("dim").get<int>() != norm.dim()) throw ConfigError("norm dim does not match its data");
    return norm;
  });
}

json manifold_to_json(const ManifoldModel& m) {
  switch (m.kind()) {
    case ManifoldKind::Circle:
      return {{"kind", "circle"}, {"length", m.length()}};
    case ManifoldKind::FlatTorus:
      return {{"kind", "torus"}, {"lattice", matrix_to_json(m.lattice())}};
    case ManifoldKind::Sphere2:
      return {{"kind", "sphere"}, {"radius", m.radius()}};
  }
  return {};
}

ManifoldModel manifold_from_json(const json& j) {
  return guarded("manifold", [&] {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "circle") return ManifoldModel::circle(j.value("length", 1.0));
    if (kind == "torus") {
      return ManifoldModel::flat_torus(j.contains("lattice") ? matrix_from_json(j.at("lattice")) : Matrix::Identity(2, 2));
    }
    if (kind == "sphere") return ManifoldModel::sphere2(j.value("radius", 1.0));
    throw ConfigError("unknown manifold kind '" + kind + "'");
  });
}

json fourier_terms_to_json(const std::vector<FourierTerm>& terms) {
  json out = json::array();
  for (const auto& t : terms) {
    json mode = json::array();
    for (Eigen::Index i = 0; i < t.mode.size(); ++i) mode.push_back(t.mode(i));
    out.push_back({{"mode", mode}, {"cos", t.cos_coeff}, {"sin", t.sin_coeff}});
  }
  return out;
}

std::vector<FourierTerm> fourier_terms_from_json(const json& j) {
  return guarded("fourier terms", [&] {
    std::vector<FourierTerm> out;
    for (const auto& t : j) {
      const auto mode = t.at("mode").get<std::vector<int>>();
      FourierTerm term;
      term.mode = Eigen::Map<const Eigen::VectorXi>(mode.data(), static_cast<Eigen::Index>(mode.size()));
      term.cos_coeff = t.value("cos", 0.0);
      term.sin_coeff = t.value("sin", 0.0);
      out.push_back(term);
    }
    return out;
  });
}

ScalarField scalar_field_from_json(const ManifoldModel& m, const json& j) {
  return guarded("scalar field", [&] {
    if (m.kind() == ManifoldKind::Sphere2) {
      SpherePolynomial poly;
      for (const auto& t : j) {
        MonomialTerm term;
        term.powers = t.at("powers").get<std::array<int, 3>>();
        term.coeff = t.at("coeff").get<double>();
        poly.terms.push_back(term);
      }
      return ScalarField(m, std::move(poly));
    }
    const Matrix lattice = m.kind() == ManifoldKind::Circle ? Matrix::Constant(1, 1, m.length()) : m.lattice();
    return ScalarField(m, FourierSeries(lattice, fourier_terms_from_json(j)));
  });
}

FinslerField field_from_json(const json& j) {
  return guarded("field", [&] {
    const ManifoldModel m = manifold_from_json(j.at("manifold"));
    const json& metric = j.at("metric");
    const std::string type = metric.at("type").get<std::string>();
    FinslerField f = [&] {
      if (type == "constant") return FinslerField::constant_norm(m, norm_from_json(metric.at("norm")));
      if (type == "round") return FinslerField::round_sphere(m);
      throw ConfigError("unknown metric type '" + type + "'");
    }();
    if (j.contains("rho")) f = FinslerField::conformal_rescale(f, scalar_field_from_json(m, j.at("rho")));
    return f;
  });
}

json lie_algebra_to_json(const LieAlgebra& algebra, double drop_below) {
  json entries = json::array();
  for (const auto& e : algebra.entries(drop_below)) entries.push_back({e.i, e.j, e.k, e.value});
  return {{"dim", algebra.dim()}, {"entries", entries}};
}

LieAlgebra lie_algebra_from_json(const json& j) {
  return guarded("lie algebra", [&] {
    const int dim = j.at("dim").get<int>();
    if (dim < 1) throw ConfigError("algebra dim must be positive");
    std::vector<StructureEntry> entries;
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 4) throw ConfigError("entry must be [i, j, k, value]");
      StructureEntry s{e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<double>()};
      if (s.i < 0 || s.j < 0 || s.k < 0 || s.i >= dim || s.j >= dim || s.k >= dim) {
        throw ConfigError("structure-constant index out of range");
      }
      entries.push_back(s);
    }
    return LieAlgebra::from_entries(dim, entries);
  });
}

json solve_report_to_json(const SolveReport& r) {
  auto list = [](const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(number_to_json(x));
    return out;
  };
  return {
      {"killing_dim", r.killing_dim},
      {"conformal_dim", r.conformal_dim},
      {"rows", r.rows},
      {"unknowns_killing", r.unknowns_killing},
      {"unknowns_conformal", r.unknowns_conformal},
      {"killing_basis", matrix_to_json(r.killing_basis)},
      {"conformal_basis", matrix_to_json(r.conformal_basis)},
      {"conformal_factors", matrix_to_json(r.conformal_factors)},
      {"rho_fit_residuals", list(r.rho_fit_residuals)},
      {"singular_values_killing", vector_to_json(r.singular_values_killing)},
      {"singular_values_conformal", vector_to_json(r.singular_values_conformal)},
      {"gap_killing", number_to_json(r.gap_killing)},
      {"gap_conformal", number_to_json(r.gap_conformal)},
      {"killing_residuals", list(r.killing_residuals)},
      {"conformal_residuals", list(r.conformal_residuals)},
      {"max_residual", number_to_json(r.max_residual)},
      {"max_rho_norm", number_to_json(r.max_rho_norm)},
      {"tolerance_used", r.tolerance_used},
      {"residual_tol", r.residual_tol},
      {"verified", r.verified},
      {"ill_conditioned", r.ill_conditioned},
      {"spurious_rho", r.spurious_rho},
      {"warnings", r.warnings},
  };
}

json config_to_json(const ExperimentConfig& c) {
  json out = {
      {"name", c.name},
      {"degree", c.degree},
      {"resolution", c.resolution},
      {"grid", c.grid},
      {"directions", c.directions},
      {"random_directions", c.random_directions},
      {"tol", c.tol},
      {"seed", c.seed},
      {"radius", c.radius},
  };
  if (!c.out_dir.empty()) out["out"] = c.out_dir;
  if (c.norm) out["norm"] = norm_to_json(*c.norm);
  if (c.rho) out["rho"] = fourier_terms_to_json(*c.rho);
  return out;
}

ExperimentConfig config_from_json(const json& j, const ExperimentConfig& defaults) {
  return guarded("experiment config", [&] {
    ExperimentConfig c = defaults;
    if (j.is_string()) {
      c.name = j.get<std::string>();
      return c;
    }
    if (!j.is_object()) throw ConfigError("experiment entry must be a name or an object");
    c.name = j.value("name", c.name);
    c.degree = j.value("degree", c.degree);
    c.resolution = j.value("resolution", c.resolution);
    c.grid = j.value("grid", c.grid);
    c.directions = j.value("directions", c.directions);
    c.random_directions = j.value("random_directions", c.random_directions);
    c.tol = j.value("tol", c.tol);
    c.seed = j.value("seed", c.seed);
    c.radius = j.value("radius", c.radius);
    c.out_dir = j.value("out", c.out_dir);
    if (j.contains("norm")) c.norm = norm_from_json(j.at("norm"));
    if (j.contains("rho")) c.rho = fourier_terms_from_json(j.at("rho"));
    return c;
  });
}

}  // namespace finsler
