// Command-line driver: named experiments, field solves, norm averaging and
// Lie-algebra reports.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finsler/averaging.hpp"
#include "finsler/conformal_solver.hpp"
#include "finsler/errors.hpp"
#include "finsler/experiments.hpp"
#include "finsler/lie_algebra.hpp"
#include "finsler/serialization.hpp"

namespace {

using finsler::json;

// Inline JSON if it looks like an object, otherwise a path.
json load_json(const std::string& source) {
  if (!source.empty() && source.front() == '{') return json::parse(source);
  std::ifstream in(source);
  if (!in) throw finsler::ConfigError("cannot read '" + source + "'");
  return json::parse(in);
}

struct Overrides {
  std::optional<int> resolution;
  std::optional<int> degree;
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string out;

  void apply(finsler::ExperimentConfig& c) const {
    if (resolution) c.resolution = *resolution;
    if (degree) c.degree = *degree;
    if (grid) c.grid = *grid;
    if (tol) c.tol = *tol;
    if (seed) c.seed = *seed;
    if (!out.empty()) c.out_dir = out;
  }
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--resolution", o.resolution, "Indicatrix quadrature resolution");
  cmd->add_option("--degree", o.degree, "Ansatz degree");
  cmd->add_option("--grid", o.grid, "Collocation nodes per torus axis (squared on the sphere)");
  cmd->add_option("--tol", o.tol, "Null-space threshold ratio and residual tolerance");
  cmd->add_option("--seed", o.seed, "Seed for the supplementary collocation directions");
}

std::vector<finsler::ExperimentConfig> experiment_list(const std::string& config_path,
                                                       const std::vector<std::string>& names,
                                                       const Overrides& o) {
  finsler::ExperimentConfig defaults;
  json entries = json::array();
  if (!config_path.empty()) {
    const json doc = load_json(config_path);
    json top = doc;
    if (top.is_object()) top.erase("experiments");
    if (top.is_object()) defaults = finsler::config_from_json(top, defaults);
    if (doc.contains("experiments")) entries = doc.at("experiments");
  }
  if (!names.empty()) {
    entries = json::array();
    for (const auto& n : names) entries.push_back(n);
  }
  if (entries.empty()) {
    for (const auto& n : finsler::experiment_names()) entries.push_back(n);
  }
  std::vector<finsler::ExperimentConfig> out;
  for (const auto& e : entries) {
    finsler::ExperimentConfig c = finsler::config_from_json(e, defaults);
    o.apply(c);
    out.push_back(c);
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& names, const Overrides& o,
            bool parallel) {
  const auto configs = experiment_list(config_path, names, o);
  std::vector<finsler::ExperimentReport> reports;
  if (parallel) {
    std::vector<std::future<finsler::ExperimentReport>> jobs;
    for (const auto& c : configs) {
      jobs.push_back(std::async(std::launch::async, [c] { return finsler::run_experiment(c.name, c); }));
    }
    for (auto& j : jobs) reports.push_back(j.get());
  } else {
    for (const auto& c : configs) {
      reports.push_back(finsler::run_experiment(c.name, c));
      std::cerr << c.name << ": " << (reports.back().pass ? "pass" : "fail") << " (" << reports.back().seconds
                << " s)\n";
    }
  }
  finsler::write_csv_summary(std::cout, reports);
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    finsler::emit_report(reports, finsler::ReportFormat::CsvSummary,
                         (std::filesystem::path(o.out) / "summary.csv").string());
  }
  bool all = true;
  for (const auto& r : reports) all = all && r.pass;
  return all ? 0 : 1;
}

int cmd_solve(const std::string& field_source, const Overrides& o, bool structure) {
  const json doc = load_json(field_source);
  const finsler::FinslerField field = finsler::field_from_json(doc);
  const int degree = o.degree.value_or(doc.value("degree", 2));
  const auto& m = field.manifold();
  const finsler::FieldBasis basis = [&] {
    switch (m.kind()) {
      case finsler::ManifoldKind::FlatTorus: return finsler::FieldBasis::torus_fourier(m, degree);
      case finsler::ManifoldKind::Sphere2: return finsler::FieldBasis::sphere_conformal(m, degree);
      default: throw finsler::ConfigError("solve-fields supports the torus and the sphere");
    }
  }();
  finsler::SolverConfig sc;
  if (o.grid) sc.grid = *o.grid;
  if (o.tol) sc.tol_ratio = sc.residual_tol = *o.tol;
  if (o.seed) sc.seed = *o.seed;
  sc.random_directions = 4;
  const finsler::SolveReport rep = finsler::solve_fields(field, basis, sc);

  json out = {{"experiment", doc.value("name", "solve-fields")},
              {"manifold", m.name()},
              {"metric", field.describe()},
              {"basis", basis.description()},
              {"basis_degree", degree},
              {"killing_dim", rep.killing_dim},
              {"conformal_dim", rep.conformal_dim},
              {"solve", finsler::solve_report_to_json(rep)}};
  if (structure) {
    const auto points = finsler::sample_points(m, m.kind() == finsler::ManifoldKind::Sphere2 ? 60 : 6, 0.21);
    try {
      const auto k = finsler::extract_structure_constants(finsler::killing_fields(rep, basis), points);
      const auto c = finsler::extract_structure_constants(finsler::conformal_fields(rep, basis), points);
      out["structure_constants"] = {{"killing", finsler::lie_algebra_to_json(k.algebra, 1e-12)},
                                    {"conformal", finsler::lie_algebra_to_json(c.algebra, 1e-12)}};
    } catch (const finsler::Error& e) {
      out["structure_constants"] = {{"error", e.what()}};
    }
  }
  const std::string text = out.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) throw finsler::Error("cannot write '" + o.out + "'");
    f << text;
  }
  return 0;
}

int cmd_average(const std::string& norm_source, int resolution, const std::string& table) {
  const finsler::MinkowskiNorm norm = finsler::norm_from_json(load_json(norm_source));
  const auto quad = finsler::sample_indicatrix(norm, resolution);
  const auto avg = finsler::averaged_norm(norm, quad);
  const auto conv = finsler::averaging_convergence(norm, resolution);
  json out = {{"norm", finsler::norm_to_json(norm)},
              {"resolution", resolution},
              {"nodes", quad.points.size()},
              {"total_weight", quad.total_weight()},
              {"Q", finsler::matrix_to_json(avg.matrix)},
              {"refinement", {{"fine_resolution", resolution * (norm.dim() == 3 ? 4 : 2)},
                              {"max_abs_difference", conv.difference},
                              {"total_weight_fine", conv.total_weight_fine}}}};
  std::cout << out.dump(2) << '\n';
  if (!table.empty()) {
    std::ofstream f(table);
    if (!f) throw finsler::Error("cannot write '" + table + "'");
    finsler::write_quadrature_table(f, quad);
  }
  return 0;
}

finsler::LieAlgebra named_algebra(const std::string& name) {
  if (name == "rotation") return finsler::LieAlgebra::rotation();
  if (name == "affine2") return finsler::LieAlgebra::affine2();
  if (name == "heisenberg") return finsler::LieAlgebra::heisenberg();
  if (name == "rotation+abelian") {
    return finsler::LieAlgebra::direct_sum(finsler::LieAlgebra::rotation(), finsler::LieAlgebra::abelian(1));
  }
  if (name.rfind("abelian", 0) == 0) return finsler::LieAlgebra::abelian(name.size() > 7 ? std::stoi(name.substr(7)) : 1);
  throw finsler::ConfigError("unknown named algebra '" + name + "'");
}

int cmd_lie(const std::string& source, const std::string& named, double tol) {
  const finsler::LieAlgebra alg = named.empty() ? finsler::lie_algebra_from_json(load_json(source)) : named_algebra(named);
  const finsler::Signature sig = finsler::killing_signature(alg, tol);
  const auto radical = finsler::killing_radical(alg, tol);
  const auto compact = finsler::compact_decomposition_check(alg, tol);
  json semisimple = json::array();
  json nilpotent = json::array();
  for (int i = 0; i < alg.dim(); ++i) {
    const finsler::Vector e = finsler::Vector::Unit(alg.dim(), i);
    semisimple.push_back(finsler::ad_semisimple(alg, e));
    nilpotent.push_back(finsler::ad_nilpotent(alg, e, tol));
  }
  json out = {{"algebra", finsler::lie_algebra_to_json(alg)},
              {"antisymmetry_residual", alg.antisymmetry_residual()},
              {"jacobi_residual", alg.jacobi_residual()},
              {"killing_gram", finsler::matrix_to_json(finsler::killing_gram(alg))},
              {"signature", {{"positive", sig.positive}, {"negative", sig.negative}, {"zero", sig.zero}}},
              {"derived_series", finsler::derived_series(alg, tol)},
              {"solvable", finsler::is_solvable(alg, tol)},
              {"cartan_solvable", finsler::cartan_solvability(alg, tol)},
              {"killing_radical",
               {{"dim", radical.basis.cols()},
                {"basis", finsler::matrix_to_json(radical.basis)},
                {"ideal_residual", radical.ideal_residual},
                {"solvable", radical.solvable}}},
              {"center_dim", finsler::center(alg, tol).cols()},
              {"basis_ad_semisimple", semisimple},
              {"basis_ad_nilpotent", nilpotent},
              {"compact_decomposition",
               {{"compact_type", compact.compact_type},
                {"derived_dim", compact.derived_dim},
                {"center_dim", compact.center_dim},
                {"kernel_dim", compact.kernel_dim},
                {"kernel_is_center", compact.kernel_is_center},
                {"direct_sum", compact.direct_sum},
                {"note", compact.note}}}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsler metrics, conformal fields and Lie-algebra diagnostics"};
  app.require_subcommand(1);

  Overrides o;
  std::string config;
  std::vector<std::string> names;
  bool parallel = false;
  auto* run = app.add_subcommand("run", "Run named experiments; exit 0 iff all pass");
  run->add_option("experiments", names, "Experiment names (default: all)");
  run->add_option("--config", config, "JSON config file");
  run->add_option("--out", o.out, "Output directory for reports and summary.csv");
  run->add_flag("--parallel", parallel, "Run experiments concurrently");
  add_overrides(run, o);

  std::string field;
  bool structure = false;
  auto* solve = app.add_subcommand("solve-fields", "Killing and conformal fields of a described metric");
  solve->add_option("--config", field, "Field description (JSON file or inline object)")->required();
  solve->add_option("--out", o.out, "Write the report here instead of stdout");
  solve->add_flag("--structure", structure, "Also extract structure constants");
  add_overrides(solve, o);

  std::string norm;
  std::string table;
  int resolution = 1024;
  auto* average = app.add_subcommand("average", "Averaged inner product of a Minkowski norm");
  average->add_option("--norm", norm, "Norm record (JSON file or inline object)")->required();
  average->add_option("--resolution", resolution, "Quadrature resolution");
  average->add_option("--table", table, "Write the quadrature nodes and weights as CSV");

  std::string algebra;
  std::string named;
  double tol = 1e-8;
  auto* lie = app.add_subcommand("lie-report", "Diagnostics of a Lie algebra given by structure constants");
  auto* src = lie->add_option("--algebra", algebra, "{dim, entries} JSON file or inline object");
  auto* nm = lie->add_option("--named", named, "rotation | affine2 | heisenberg | abelianN | rotation+abelian");
  lie->add_option("--tol", tol, "Rank threshold ratio");
  src->excludes(nm);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, names, o, parallel);
    if (*solve) return cmd_solve(field, o, structure);
    if (*average) return cmd_average(norm, resolution, table);
    if (*lie) {
      if (algebra.empty() && named.empty()) throw finsler::ConfigError("lie-report needs --algebra or --named");
      return cmd_lie(algebra, named, tol);
    }
  } catch (const finsler::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
