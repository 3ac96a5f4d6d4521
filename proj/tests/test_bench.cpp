#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fracstep/bench.hpp"
#include "json.hpp"

using namespace fracstep;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) {
    fields.push_back(cur);
  }
  if (!line.empty() && line.back() == ',') {
    fields.push_back("");
  }
  return fields;
}

// Wall-clock fields are the only nondeterministic content; strip them before
// byte comparisons.
std::string strip_wall_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string out, line;
  while (std::getline(in, line)) {
    auto fields = split_csv_line(line);
    if (fields.size() == 12) {
      fields.erase(fields.begin() + 10);
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out += (i ? "," : "") + fields[i];
    }
    out += '\n';
  }
  return out;
}

std::string strip_wall_json(const std::string& js) {
  static const std::regex wall(", \"wall_ms\": [-+0-9.eE]+");
  return std::regex_replace(js, wall, "");
}

StudyConfig tiny_linear_study() {
  StudyConfig cfg;
  cfg.problem = "linear-mode-1d";
  cfg.alphas = {0.5};
  cfg.ks = {2};
  cfg.base_steps = 16;
  cfg.levels = 3;
  cfg.mesh_M = 50;
  cfg.backend = SpatialBackend::fd1d;
  cfg.ref_mode = RefMode::exact_oracle;
  return cfg;
}

}  // namespace

TEST_CASE("observed orders from error sequences") {
  const auto r = observed_order({4e-2, 1e-2, 2.5e-3});
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-12));

  // A five-level error column with a fractional tail order; the mean of the
  // last two ratios sits near 2.35.
  const auto rr =
      observed_order({8.57e-8, 1.97e-8, 4.13e-9, 8.31e-10, 1.63e-10});
  REQUIRE(rr.size() == 4);
  const double tail = 0.5 * (rr[2] + rr[3]);
  CHECK(std::abs(tail - 2.35) < 0.05);

  const auto stagn = observed_order({1e-3, 1e-3});
  REQUIRE(stagn.size() == 1);
  CHECK(stagn[0] == 0.0);

  CHECK_THROWS_AS(observed_order({1e-3}), std::domain_error);
  CHECK_THROWS_AS(observed_order({1e-3, 0.0}), std::domain_error);
  CHECK_THROWS_AS(observed_order({-1e-3, 1e-4}), std::domain_error);
}

TEST_CASE("configuration validation") {
  StudyConfig cfg = tiny_linear_study();
  cfg.alphas = {1.5};
  CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);
  cfg = tiny_linear_study();
  cfg.ks = {7};
  CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);
  cfg = tiny_linear_study();
  cfg.ks = {};
  CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);
  cfg = tiny_linear_study();
  cfg.mesh_M = 1;
  CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);
  cfg = tiny_linear_study();
  cfg.backend = SpatialBackend::fem2d;  // 1D problem
  CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);
  cfg = tiny_linear_study();
  cfg.ref_mode = RefMode::fine_run;
  cfg.ref_multiplier = 2;  // reference not meaningfully finer
  CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);

  StudyConfig noexact;
  noexact.problem = "allen-cahn-1d";
  noexact.alphas = {0.5};
  noexact.ks = {2};
  noexact.base_steps = 8;
  noexact.levels = 2;
  noexact.mesh_M = 16;
  noexact.ref_mode = RefMode::exact_oracle;
  CHECK_THROWS_AS(run_study(noexact), std::invalid_argument);
}

TEST_CASE("second-order study against the exact amplitude") {
  const ConvergenceReport report = run_study(tiny_linear_study());
  CHECK(report.reference == "exact");
  REQUIRE(report.cells.size() == 1);
  const CellResult& cell = report.cells[0];
  CHECK(cell.expected_rate == doctest::Approx(2.0));
  REQUIRE(cell.levels.size() == 3);
  CHECK(cell.levels[0].N == 16);
  CHECK(cell.levels[2].N == 64);
  CHECK(cell.levels[1].tau == doctest::Approx(1.0 / 32).epsilon(1e-15));
  for (const auto& lv : cell.levels) {
    CHECK_FALSE(lv.failed);
    CHECK(lv.error > 0.0);
    CHECK(lv.newton_avg >= 1.0);
  }
  CHECK(cell.levels[1].error < cell.levels[0].error);
  CHECK(cell.levels[2].error < cell.levels[1].error);
  REQUIRE(cell.tail_rate.has_value());
  CHECK(std::abs(*cell.tail_rate - 2.0) < 0.1);
}

TEST_CASE("self-referencing study with a finer run") {
  StudyConfig cfg;
  cfg.problem = "allen-cahn-1d";
  cfg.alphas = {0.7};
  cfg.ks = {2};
  cfg.base_steps = 16;
  cfg.levels = 3;
  cfg.mesh_M = 32;
  cfg.ref_mode = RefMode::fine_run;
  cfg.ref_multiplier = 16;
  cfg.ref_k = 6;
  const ConvergenceReport report = run_study(cfg);
  CHECK(report.reference == "fine:16");
  REQUIRE(report.cells.size() == 1);
  const CellResult& cell = report.cells[0];
  REQUIRE(cell.levels.size() == 3);
  for (const auto& lv : cell.levels) {
    CHECK_FALSE(lv.failed);
    CHECK(lv.error > 0.0);
  }
  REQUIRE(cell.tail_rate.has_value());
  CHECK(*cell.tail_rate > 1.5);
  CHECK(*cell.tail_rate < 2.5);
}

TEST_CASE("a diverging cell is recorded, not fatal") {
  // k=1 on the consistent-mass backend at very coarse N: the fixed-matrix
  // splitting is outside its contraction regime at the first level, that
  // level fails, and the study still completes.
  StudyConfig cfg;
  cfg.problem = "allen-cahn-1d";
  cfg.alphas = {0.7};
  cfg.ks = {1};
  cfg.base_steps = 8;
  cfg.levels = 2;
  cfg.mesh_M = 16;
  cfg.backend = SpatialBackend::fem1d;
  cfg.ref_mode = RefMode::fine_run;
  cfg.ref_multiplier = 4;
  cfg.ref_k = 6;
  const ConvergenceReport report = run_study(cfg);
  REQUIRE(report.cells.size() == 1);
  const CellResult& cell = report.cells[0];
  CHECK_FALSE(cell.tail_rate.has_value());
  bool any_failed = false;
  for (const auto& lv : cell.levels) {
    if (lv.failed) {
      any_failed = true;
      CHECK_FALSE(lv.failure.empty());
      CHECK_FALSE(lv.rate.has_value());
    }
  }
  CHECK(any_failed);

  // Failed levels leave the error and rate columns empty in the CSV.
  const std::string csv = report_to_csv(report);
  CHECK(csv.find(",,") != std::string::npos);
}

TEST_CASE("report serialization") {
  const ConvergenceReport report = run_study(tiny_linear_study());

  SUBCASE("csv shape") {
    const std::string csv = report_to_csv(report);
    REQUIRE(!csv.empty());
    CHECK(csv.back() == '\n');
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "problem,alpha,k,corrected,level,N,tau,error,rate,expected_rate,"
          "wall_ms,newton_avg");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
      const auto fields = split_csv_line(line);
      CHECK(fields.size() == 12);
      CHECK(fields[0] == "linear-mode-1d");
      CHECK(fields[3] == "true");
      ++rows;
    }
    CHECK(rows == 3);
  }

  SUBCASE("json mirrors the report exactly") {
    const std::string js = report_to_json(report);
    CHECK(js.back() == '\n');
    const nlohmann::json parsed = nlohmann::json::parse(js);
    CHECK(parsed["problem"] == "linear-mode-1d");
    CHECK(parsed["backend"] == "fd1d");
    CHECK(parsed["mesh"] == 50);
    CHECK(parsed["reference"] == "exact");
    REQUIRE(parsed["cells"].size() == 1);
    const auto& cell = parsed["cells"][0];
    CHECK(cell["alpha"].get<double>() == 0.5);
    CHECK(cell["k"].get<int>() == 2);
    CHECK(cell["corrected"].get<bool>() == true);
    CHECK(cell["expected_rate"].get<double>() == report.cells[0].expected_rate);
    CHECK(cell["tail_rate"].get<double>() == *report.cells[0].tail_rate);
    REQUIRE(cell["levels"].size() == 3);
    for (int l = 0; l < 3; ++l) {
      const auto& lv = cell["levels"][l];
      const LevelResult& src = report.cells[0].levels[l];
      CHECK(lv["N"].get<int>() == src.N);
      // 17 significant digits round-trip doubles exactly.
      CHECK(lv["tau"].get<double>() == src.tau);
      CHECK(lv["error"].get<double>() == src.error);
      if (src.rate) {
        CHECK(lv["rate"].get<double>() == *src.rate);
      } else {
        CHECK(lv["rate"].is_null());
      }
    }
    CHECK(parsed["cells"][0]["levels"][0]["rate"].is_null());
  }

  SUBCASE("empty study renders a bare header") {
    ConvergenceReport empty;
    CHECK(report_to_csv(empty) ==
          "problem,alpha,k,corrected,level,N,tau,error,rate,expected_rate,"
          "wall_ms,newton_avg\n");
  }

  SUBCASE("files match the in-memory emitters") {
    const std::string path = "bench_report_test.csv";
    emit_report(report, ReportFormat::csv, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == report_to_csv(report));
    std::remove(path.c_str());

    CHECK_THROWS_AS(
        emit_report(report, ReportFormat::csv, "no/such/dir/report.csv"),
        std::runtime_error);
  }
}

TEST_CASE("expected rate column reflects the theoretical order cap") {
  StudyConfig cfg = tiny_linear_study();
  cfg.alphas = {0.3};
  cfg.ks = {3};
  cfg.base_steps = 8;
  cfg.levels = 2;
  cfg.mesh_M = 20;
  const ConvergenceReport report = run_study(cfg);
  REQUIRE(report.cells.size() == 1);
  CHECK(report.cells[0].expected_rate ==
        doctest::Approx(1.6).epsilon(1e-15));
}

TEST_CASE("reports are deterministic and thread-count independent") {
  StudyConfig cfg;
  cfg.problem = "allen-cahn-1d";
  cfg.alphas = {0.5, 0.7};
  cfg.ks = {1, 2};
  cfg.base_steps = 16;
  cfg.levels = 2;
  cfg.mesh_M = 24;
  cfg.ref_mode = RefMode::fine_run;
  cfg.ref_multiplier = 4;
  cfg.ref_k = 3;

  const ConvergenceReport a = run_study(cfg);
  const ConvergenceReport b = run_study(cfg);
  CHECK(strip_wall_csv(report_to_csv(a)) == strip_wall_csv(report_to_csv(b)));
  CHECK(strip_wall_json(report_to_json(a)) ==
        strip_wall_json(report_to_json(b)));

  cfg.jobs = 3;
  const ConvergenceReport c = run_study(cfg);
  CHECK(strip_wall_csv(report_to_csv(a)) == strip_wall_csv(report_to_csv(c)));
}

TEST_CASE("backend names") {
  CHECK(std::string(backend_name(SpatialBackend::fd1d)) == "fd1d");
  CHECK(std::string(backend_name(SpatialBackend::fem1d)) == "fem1d");
  CHECK(std::string(backend_name(SpatialBackend::fem2d)) == "fem2d");
}
