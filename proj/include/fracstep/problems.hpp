#ifndef FRACSTEP_PROBLEMS_HPP
#define FRACSTEP_PROBLEMS_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "fracstep/discretize.hpp"
#include "fracstep/stepper.hpp"

namespace fracstep {

// One semilinear subdiffusion instance on the unit interval or unit square
// with homogeneous Dirichlet boundary. For single-mode linear problems the
// exact semidiscrete solution is available (see exact_solution); it uses the
// discrete eigenvalue of the chosen spatial operator so that measured errors
// are purely temporal.
struct ProblemSpec {
  std::string name;
  double alpha;   // fractional order in (0,1); studies override per cell
  double kappa;   // diffusion coefficient > 0
  SemilinearRhs rhs;
  std::function<double(double, double)> u0;  // (x, y); y ignored in 1D
  double T;
  int dim;
  bool has_exact = false;
  int mode_m = 0;  // eigenmode index when has_exact
};

// kappa = 1/10, f(u) = 4(u - u^3), u0 = 4x(1-x)y(1-y), T = 1, unit square.
ProblemSpec allen_cahn_2d();

// 1D analogue: kappa = 1/10, f(u) = 4(u - u^3), u0 = 4x(1-x), T = 1.
ProblemSpec allen_cahn_1d();

// f == 0, kappa = 1, u0 = sin(m pi x); exact semidiscrete solution
// E_{alpha,1}(-lambda_h t^alpha) sin(m pi x) with the backend-dependent
// discrete eigenvalue lambda_h. Requires m >= 1, alpha in (0,1).
ProblemSpec linear_mode_1d(double alpha, int m);

// Problem factory by CLI name ("allen-cahn-2d", "allen-cahn-1d",
// "linear-mode-1d"); throws std::invalid_argument for unknown names.
ProblemSpec problem_by_name(const std::string& name, double alpha, int mode_m);

// Nodal interpolation of u0 on the interior nodes.
Eigen::VectorXd initial_vector(const ProblemSpec& prob, const Mesh& mesh);

// Discrete eigenvalue of the kappa-scaled operator for mode sin(m pi x):
//   fd1d:  kappa (4/h^2) sin^2(m pi h / 2)
//   fem1d: kappa (6/h^2) (1 - cos(m pi h)) / (2 + cos(m pi h))
// (generalized eigenvalue with respect to the consistent mass matrix).
double discrete_mode_eigenvalue(SpatialBackend backend, const Mesh& mesh,
                                double kappa, int m);

// Exact semidiscrete solution at time t as a nodal vector; only available
// when prob.has_exact (throws std::logic_error otherwise).
Eigen::VectorXd exact_solution(const ProblemSpec& prob, const Mesh& mesh,
                               SpatialBackend backend, double t);

}  // namespace fracstep

#endif  // FRACSTEP_PROBLEMS_HPP
