#include "fracstep/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "fracstep/special_fn.hpp"

namespace fracstep {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

SemilinearRhs allen_cahn_rhs() {
  return SemilinearRhs{
      [](double u) { return 4.0 * (u - u * u * u); },
      [](double u) { return 4.0 - 12.0 * u * u; },
  };
}

}  // namespace

ProblemSpec allen_cahn_2d() {
  ProblemSpec p;
  p.name = "allen-cahn-2d";
  p.alpha = 0.5;
  p.kappa = 0.1;
  p.rhs = allen_cahn_rhs();
  p.u0 = [](double x, double y) {
    return 4.0 * x * (1.0 - x) * y * (1.0 - y);
  };
  p.T = 1.0;
  p.dim = 2;
  return p;
}

ProblemSpec allen_cahn_1d() {
  ProblemSpec p;
  p.name = "allen-cahn-1d";
  p.alpha = 0.5;
  p.kappa = 0.1;
  p.rhs = allen_cahn_rhs();
  p.u0 = [](double x, double) { return 4.0 * x * (1.0 - x); };
  p.T = 1.0;
  p.dim = 1;
  return p;
}

ProblemSpec linear_mode_1d(double alpha, int m) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("linear-mode-1d: alpha must be in (0, 1)");
  }
  if (m < 1) {
    throw std::domain_error("linear-mode-1d: mode index must be >= 1");
  }
  ProblemSpec p;
  p.name = "linear-mode-1d";
  p.alpha = alpha;
  p.kappa = 1.0;
  p.rhs = SemilinearRhs{[](double) { return 0.0; }, [](double) { return 0.0; }};
  p.u0 = [m](double x, double) { return std::sin(m * kPi * x); };
  p.T = 1.0;
  p.dim = 1;
  p.has_exact = true;
  p.mode_m = m;
  return p;
}

ProblemSpec problem_by_name(const std::string& name, double alpha,
                            int mode_m) {
  if (name == "allen-cahn-2d") {
    ProblemSpec p = allen_cahn_2d();
    p.alpha = alpha;
    return p;
  }
  if (name == "allen-cahn-1d") {
    ProblemSpec p = allen_cahn_1d();
    p.alpha = alpha;
    return p;
  }
  if (name == "linear-mode-1d") {
    return linear_mode_1d(alpha, mode_m);
  }
  throw std::invalid_argument("unknown problem: " + name);
}

Eigen::VectorXd initial_vector(const ProblemSpec& prob, const Mesh& mesh) {
  if (prob.dim != mesh.dim) {
    throw std::invalid_argument("problem and mesh dimensions differ");
  }
  Eigen::VectorXd u(mesh.n_interior());
  for (int i = 0; i < mesh.n_interior(); ++i) {
    u[i] = prob.u0(mesh.xs[i], mesh.ys[i]);
  }
  return u;
}

double discrete_mode_eigenvalue(SpatialBackend backend, const Mesh& mesh,
                                double kappa, int m) {
  if (mesh.dim != 1) {
    throw std::invalid_argument("mode eigenvalues are defined on 1D meshes");
  }
  const double h = mesh.h;
  const double s = std::sin(0.5 * m * kPi * h);
  switch (backend) {
    case SpatialBackend::fd1d:
      return kappa * 4.0 / (h * h) * s * s;
    case SpatialBackend::fem1d: {
      const double c = std::cos(m * kPi * h);
      // generalized eigenvalue of (stiffness, consistent mass)
      return kappa * 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
    }
    case SpatialBackend::fem2d:
      break;
  }
  throw std::invalid_argument("unsupported backend for mode eigenvalues");
}

Eigen::VectorXd exact_solution(const ProblemSpec& prob, const Mesh& mesh,
                               SpatialBackend backend, double t) {
  if (!prob.has_exact) {
    throw std::logic_error("problem '" + prob.name + "' has no exact oracle");
  }
  const double lam =
      discrete_mode_eigenvalue(backend, mesh, prob.kappa, prob.mode_m);
  const double amp = linear_mode_solution(prob.alpha, lam, t);
  Eigen::VectorXd u(mesh.n_interior());
  for (int i = 0; i < mesh.n_interior(); ++i) {
    u[i] = amp * std::sin(prob.mode_m * kPi * mesh.xs[i]);
  }
  return u;
}

}  // namespace fracstep
