#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "finsler/errors.hpp"
#include "finsler/experiments.hpp"

using namespace finsler;

namespace {

ExperimentReport run(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  return run_experiment(name, c);
}

std::string csv(const std::vector<ExperimentReport>& r) {
  std::ostringstream out;
  write_csv_summary(out, r);
  return out.str();
}

}  // namespace

TEST_CASE("summary of nothing is just the header") {
  CHECK(csv({}) == "experiment,killing_dim,conformal_dim,max_residual,gap,pass\n");
}

TEST_CASE("every named experiment passes at defaults") {
  for (const auto& name : experiment_names()) {
    CAPTURE(name);
    const auto r = run(name);
    CHECK(r.pass);
    CHECK_FALSE(r.checks.empty());
    for (const auto& c : r.checks) {
      CAPTURE(c.name);
      CHECK(c.passed);
    }
  }
}

TEST_CASE("s2-round row") {
  const auto r = run("s2-round");
  CHECK(r.killing_dim == 3);
  CHECK(r.conformal_dim == 6);
  const std::string text = csv({r});
  CHECK(text.find("\ns2-round,3,6,") != std::string::npos);
  CHECK(text.substr(text.size() - 5) == "pass\n");
  CHECK(report_to_json(r).at("details").contains("killing_algebra"));
}

TEST_CASE("non-solving experiments leave dimension cells empty") {
  const std::string text = csv({run("circle-lambda")});
  CHECK(text.find("\ncircle-lambda,,,") != std::string::npos);
}

TEST_CASE("summaries are deterministic") {
  std::vector<ExperimentReport> a, b;
  for (const char* n : {"randers-torus", "rescaled-randers-torus", "averaging-equivariance"}) {
    a.push_back(run(n));
    b.push_back(run(n));
  }
  CHECK(csv(a) == csv(b));
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(run("hyperbolic-plane"), ConfigError);
  ExperimentConfig c;
  c.name = "randers-torus";
  c.tol = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.tol = 1e-8;
  c.grid = 2;
  c.directions = 2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(run_experiment("randers-torus", c), ConfigError);
}

TEST_CASE("reports land in the output directory") {
  const auto dir = std::filesystem::temp_directory_path() / "finsler_test_reports";
  std::filesystem::remove_all(dir);
  ExperimentConfig c;
  c.name = "circle-lambda";
  c.out_dir = dir.string();
  const auto r = run_experiment("circle-lambda", c);
  CHECK(std::filesystem::exists(dir / "circle-lambda.json"));
  emit_report({r}, ReportFormat::CsvSummary, (dir / "summary.csv").string());
  std::ifstream in(dir / "summary.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "experiment,killing_dim,conformal_dim,max_residual,gap,pass");
  std::filesystem::remove_all(dir);
}
