#ifndef FRACSTEP_BENCH_HPP
#define FRACSTEP_BENCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "fracstep/discretize.hpp"

namespace fracstep {

enum class RefMode { exact_oracle, fine_run };
enum class ReportFormat { csv, json };

// One convergence study: sweep (alpha, k) cells over refinement levels
// N = base_steps * 2^l, l = 0..levels-1, measure errors at the final time
// against a reference, and fit observed orders.
struct StudyConfig {
  std::string problem = "allen-cahn-1d";
  std::vector<double> alphas = {0.3, 0.5, 0.7};
  std::vector<int> ks = {1, 2, 3, 4, 5, 6};
  bool corrected = true;
  int base_steps = 50;
  int levels = 4;
  int mesh_M = 200;
  SpatialBackend backend = SpatialBackend::fd1d;
  RefMode ref_mode = RefMode::fine_run;
  int ref_multiplier = 16;  // reference N = multiplier * finest study N
  int ref_k = 6;
  int mode_m = 1;  // eigenmode for linear-mode problems
  int jobs = 1;    // worker threads across study cells
};

struct LevelResult {
  int level = 0;
  int N = 0;
  double tau = 0.0;
  double error = 0.0;
  // log2(e_{l-1}/e_l); absent on the first level, on failed levels, and
  // where either error sits within 50x of the reference noise floor.
  std::optional<double> rate;
  double wall_ms = 0.0;
  double newton_avg = 0.0;
  bool failed = false;
  std::string failure;
};

struct CellResult {
  double alpha = 0.0;
  int k = 0;
  bool corrected = true;
  double expected_rate = 0.0;  // min(k, 1 + 2 alpha)
  std::vector<LevelResult> levels;
  std::optional<double> tail_rate;  // mean of the last two reported rates
};

struct ConvergenceReport {
  std::string problem;
  SpatialBackend backend = SpatialBackend::fd1d;
  int mesh_M = 0;
  std::string reference;  // "exact" or "fine:<multiplier>"
  std::vector<CellResult> cells;
};

// Runs every (alpha, k, level) cell; a step failure is recorded in the cell
// and the study continues. Deterministic for a fixed config: reports from
// two invocations are byte-identical apart from wall-clock fields.
ConvergenceReport run_study(const StudyConfig& config);

// r_l = log2(e_l / e_{l+1}); throws std::domain_error on nonpositive errors
// or fewer than two entries.
std::vector<double> observed_order(const std::vector<double>& errors);

// CSV columns: problem, alpha, k, corrected, level, N, tau, error, rate,
// expected_rate, wall_ms, newton_avg. JSON mirrors the same fields nested
// per (alpha, k) cell. Floats carry 17 significant digits; the file ends
// with a newline; field order is stable.
void emit_report(const ConvergenceReport& report, ReportFormat format,
                 const std::string& path);

// The emitters behind emit_report, exposed for in-memory comparisons.
std::string report_to_csv(const ConvergenceReport& report);
std::string report_to_json(const ConvergenceReport& report);

const char* backend_name(SpatialBackend backend);

}  // namespace fracstep

#endif  // FRACSTEP_BENCH_HPP
