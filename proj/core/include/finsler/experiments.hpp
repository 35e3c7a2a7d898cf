#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler/conformal_solver.hpp"
#include "finsler/norm.hpp"

namespace finsler {

/// Names accepted by run_experiment, in their canonical order.
const std::vector<std::string>& experiment_names();

/// Knobs of one experiment. Expected dimensions are not configurable; they
/// belong to the experiment definitions.
struct ExperimentConfig {
  std::string name;
  int degree = 2;
  /// Indicatrix quadrature resolution (averaging experiments).
  int resolution = 1024;
  /// Collocation density: grid nodes per torus axis, grid^2 nodes on the sphere.
  int grid = 12;
  int directions = 8;
  int random_directions = 4;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  /// Output directory for per-experiment files; empty writes nothing.
  std::string out_dir;

  /// Metric overrides. `norm` replaces the constant norm of the torus
  /// experiments; `rho` replaces the non-constant conformal factor of the
  /// rescaled ones; `radius` is the sphere radius.
  std::optional<MinkowskiNorm> norm;
  std::optional<std::vector<FourierTerm>> rho;
  double radius = 1.0;

  /// Throws ConfigError for non-positive tolerances or densities that cannot
  /// meet the 3x row bound.
  void validate() const;
};

/// One recorded pass/fail decision: `value` compared against `threshold`.
struct Check {
  std::string name;
  double value = 0.0;
  std::string op;  // "<=", ">=", "==", "<", ">"
  double threshold = 0.0;
  bool passed = false;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string manifold;
  std::string metric;
  std::string basis;
  /// -1 when the experiment does not solve for fields.
  int killing_dim = -1;
  int conformal_dim = -1;
  double max_residual = 0.0;
  /// Smallest reported singular-value gap; NaN when no solve ran.
  double gap = 0.0;
  std::optional<SolveReport> solve;
  std::vector<Check> checks;
  nlohmann::json details = nlohmann::json::object();
  bool pass = false;
  double seconds = 0.0;
};

/// Throws ConfigError for an unknown name or an invalid config.
ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& config);

/// "experiment,killing_dim,conformal_dim,max_residual,gap,pass" plus one row
/// per report. Byte-identical for identical inputs (no timings).
void write_csv_summary(std::ostream& out, const std::vector<ExperimentReport>& reports);

/// Full report document (config echo, solve report, checks, details,
/// wall-clock time).
nlohmann::json report_to_json(const ExperimentReport& report);

enum class ReportFormat { Json, CsvSummary };

/// Writes one report (JSON) or the summary of a list (CSV) to `path`.
/// Throws Error on I/O failure.
void emit_report(const std::vector<ExperimentReport>& reports, ReportFormat format, const std::string& path);

}  // namespace finsler
