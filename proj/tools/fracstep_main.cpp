// fracstep: convergence studies, quadrature weights, and single solves for
// semilinear subdiffusion problems. Exit codes: 0 success, 2 configuration
// error, 3 solver failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracstep/bench.hpp"
#include "fracstep/cq_kernel.hpp"
#include "fracstep/problems.hpp"
#include "fracstep/stepper.hpp"

namespace {

using namespace fracstep;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    parts.push_back(cur);
  }
  return parts;
}

std::vector<double> parse_alpha_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) {
      throw std::invalid_argument("bad alpha value: '" + tok + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw std::invalid_argument("empty alpha list");
  }
  return out;
}

// Accepts "2", "2,3,6", "1..6", and mixtures like "1..3,6".
std::vector<int> parse_k_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& tok : split(s, ',')) {
    const auto dots = tok.find("..");
    std::size_t pos = 0;
    if (dots == std::string::npos) {
      const int v = std::stoi(tok, &pos);
      if (pos != tok.size()) {
        throw std::invalid_argument("bad k value: '" + tok + "'");
      }
      out.push_back(v);
    } else {
      const std::string lo_s = tok.substr(0, dots);
      const std::string hi_s = tok.substr(dots + 2);
      const int lo = std::stoi(lo_s, &pos);
      if (pos != lo_s.size()) {
        throw std::invalid_argument("bad k range: '" + tok + "'");
      }
      const int hi = std::stoi(hi_s, &pos);
      if (pos != hi_s.size() || hi < lo) {
        throw std::invalid_argument("bad k range: '" + tok + "'");
      }
      for (int v = lo; v <= hi; ++v) {
        out.push_back(v);
      }
    }
  }
  if (out.empty()) {
    throw std::invalid_argument("empty k list");
  }
  return out;
}

SpatialBackend parse_backend(const std::string& s) {
  if (s == "fd1d") return SpatialBackend::fd1d;
  if (s == "fem1d") return SpatialBackend::fem1d;
  if (s == "fem2d") return SpatialBackend::fem2d;
  throw std::invalid_argument("unknown backend: '" + s +
                              "' (expected fd1d, fem1d, or fem2d)");
}

void parse_ref(const std::string& s, StudyConfig& cfg) {
  if (s == "exact") {
    cfg.ref_mode = RefMode::exact_oracle;
    return;
  }
  if (s.rfind("fine:", 0) == 0) {
    const std::string mult = s.substr(5);
    std::size_t pos = 0;
    cfg.ref_mode = RefMode::fine_run;
    cfg.ref_multiplier = std::stoi(mult, &pos);
    if (pos != mult.size()) {
      throw std::invalid_argument("bad reference multiplier: '" + mult + "'");
    }
    return;
  }
  throw std::invalid_argument("unknown --ref value: '" + s +
                              "' (expected exact or fine:<multiplier>)");
}

void write_text(const std::string& body, const std::string& path) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open for writing: " + path);
  }
  out << body;
  if (!out) {
    throw std::invalid_argument("write failed: " + path);
  }
}

int cmd_weights(int k, double alpha, int n) {
  const CqWeights w = cq_weights(k, alpha, n);
  std::string body;
  for (double wi : w.weights) {
    body += fmt17(wi);
    body += '\n';
  }
  std::cout << body;
  return 0;
}

int cmd_study(const StudyConfig& cfg, ReportFormat format,
              const std::string& out_path) {
  const ConvergenceReport report = run_study(cfg);
  const std::string body =
      format == ReportFormat::csv ? report_to_csv(report)
                                  : report_to_json(report);
  write_text(body, out_path);
  return 0;
}

int cmd_solve(const std::string& problem, double alpha, int k, int steps,
              int mesh_M, int mode_m, const std::string& backend_str,
              const std::vector<int>& snapshot_at, const std::string& out_path) {
  const ProblemSpec prob = problem_by_name(problem, alpha, mode_m);
  SpatialBackend backend;
  if (backend_str.empty()) {
    backend = prob.dim == 2 ? SpatialBackend::fem2d : SpatialBackend::fd1d;
  } else {
    backend = parse_backend(backend_str);
    const int backend_dim = backend == SpatialBackend::fem2d ? 2 : 1;
    if (backend_dim != prob.dim) {
      throw std::invalid_argument("backend dimension does not match problem");
    }
  }
  const Mesh mesh = build_mesh(prob.dim, mesh_M);
  const OperatorPair ops = backend == SpatialBackend::fd1d
                               ? assemble_fd(mesh, prob.kappa)
                               : assemble_fem(mesh, prob.kappa);

  StepperConfig cfg;
  cfg.k = k;
  cfg.N = steps;
  cfg.T = prob.T;
  cfg.alpha = alpha;
  const Trajectory traj =
      run(cfg, ops, prob.rhs, initial_vector(prob, mesh), snapshot_at);

  std::string body = prob.dim == 2 ? "x,y" : "x";
  for (const auto& [n, u] : traj.snapshots) {
    body += ",u_" + std::to_string(n);
  }
  body += '\n';
  for (int r = 0; r < mesh.n_interior(); ++r) {
    body += fmt17(mesh.xs[r]);
    if (prob.dim == 2) {
      body += ',';
      body += fmt17(mesh.ys[r]);
    }
    for (const auto& [n, u] : traj.snapshots) {
      body += ',';
      body += fmt17(u[r]);
    }
    body += '\n';
  }
  write_text(body, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convolution-quadrature BDF solver for semilinear subdiffusion"};
  app.require_subcommand(1);

  // --- weights ---
  auto* weights = app.add_subcommand(
      "weights", "Print quadrature weights w_0..w_n, one per line");
  int w_k = 1;
  double w_alpha = 0.5;
  int w_n = 10;
  weights->add_option("--k", w_k, "BDF order (1..6)")->required();
  weights->add_option("--alpha", w_alpha, "fractional order in (0,1]")
      ->required();
  weights->add_option("--n", w_n, "largest weight index")->required();

  // --- study ---
  auto* study = app.add_subcommand(
      "study", "Run a temporal convergence study and emit a report");
  std::string s_problem = "allen-cahn-1d";
  std::string s_alpha = "0.3,0.5,0.7";
  std::string s_k = "1..6";
  bool s_uncorrected = false;
  int s_base_steps = 50;
  int s_levels = 4;
  int s_mesh = 200;
  std::string s_backend = "fd1d";
  std::string s_ref = "fine:16";
  int s_ref_k = 6;
  int s_mode_m = 1;
  int s_jobs = 1;
  std::string s_format = "csv";
  std::string s_out;
  study->add_option("--problem", s_problem, "problem name");
  study->add_option("--alpha", s_alpha, "comma-separated fractional orders");
  study->add_option("--k", s_k, "BDF orders: list and/or a..b ranges");
  study->add_flag("--uncorrected", s_uncorrected,
                  "disable the starting corrections");
  study->add_option("--base-steps", s_base_steps, "N at the coarsest level");
  study->add_option("--levels", s_levels, "number of halving levels");
  study->add_option("--mesh", s_mesh, "spatial subdivisions per direction");
  study->add_option("--backend", s_backend, "fd1d, fem1d, or fem2d");
  study->add_option("--ref", s_ref, "reference: exact or fine:<multiplier>");
  study->add_option("--ref-k", s_ref_k, "BDF order of the fine reference run");
  study->add_option("--mode-m", s_mode_m, "eigenmode for linear-mode problems");
  study->add_option("--jobs", s_jobs, "worker threads across study cells");
  study->add_option("--format", s_format, "csv or json");
  study->add_option("--out", s_out, "output path (stdout when omitted)");

  // --- solve ---
  auto* solve = app.add_subcommand(
      "solve", "Run one configuration and emit nodal snapshots as CSV");
  std::string v_problem = "allen-cahn-1d";
  double v_alpha = 0.5;
  int v_k = 2;
  int v_steps = 100;
  int v_mesh = 100;
  int v_mode_m = 1;
  std::string v_backend;
  std::vector<int> v_snapshots;
  std::string v_out;
  solve->add_option("--problem", v_problem, "problem name");
  solve->add_option("--alpha", v_alpha, "fractional order in (0,1)")
      ->required();
  solve->add_option("--k", v_k, "BDF order (1..6)")->required();
  solve->add_option("--steps", v_steps, "number of time steps")->required();
  solve->add_option("--mesh", v_mesh, "spatial subdivisions per direction")
      ->required();
  solve->add_option("--mode-m", v_mode_m, "eigenmode for linear-mode problems");
  solve->add_option("--backend", v_backend,
                    "fd1d, fem1d, or fem2d (default: by problem dimension)");
  solve->add_option("--snapshot", v_snapshots,
                    "comma-separated step indices to record")
      ->delimiter(',');
  solve->add_option("--out", v_out, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(weights)) {
      return cmd_weights(w_k, w_alpha, w_n);
    }
    if (app.got_subcommand(study)) {
      StudyConfig cfg;
      cfg.problem = s_problem;
      cfg.alphas = parse_alpha_list(s_alpha);
      cfg.ks = parse_k_list(s_k);
      cfg.corrected = !s_uncorrected;
      cfg.base_steps = s_base_steps;
      cfg.levels = s_levels;
      cfg.mesh_M = s_mesh;
      cfg.backend = parse_backend(s_backend);
      parse_ref(s_ref, cfg);
      cfg.ref_k = s_ref_k;
      cfg.mode_m = s_mode_m;
      cfg.jobs = s_jobs;
      ReportFormat format;
      if (s_format == "csv") {
        format = ReportFormat::csv;
      } else if (s_format == "json") {
        format = ReportFormat::json;
      } else {
        throw std::invalid_argument("unknown --format value: '" + s_format +
                                    "'");
      }
      return cmd_study(cfg, format, s_out);
    }
    return cmd_solve(v_problem, v_alpha, v_k, v_steps, v_mesh, v_mode_m,
                     v_backend, v_snapshots, v_out);
  } catch (const StepFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const SolveFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
