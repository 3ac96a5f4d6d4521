#ifndef FRACSTEP_STEPPER_HPP
#define FRACSTEP_STEPPER_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracstep/cq_kernel.hpp"
#include "fracstep/discretize.hpp"

namespace fracstep {

struct StepperConfig {
  int k = 1;
  int N = 1;            // number of time steps, N >= k
  double T = 1.0;       // final time
  double alpha = 0.5;   // fractional order in (0, 1]
  bool corrected = true;
  double newton_tol = 1e-12;  // on the algebraic residual infinity-norm
  int newton_max_iter = 25;

  double tau() const { return T / N; }
};

// Nonlinearity together with its exact derivative (Newton needs both).
struct SemilinearRhs {
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
};

struct Trajectory {
  std::vector<double> times;                             // t_0..t_N
  std::vector<std::pair<int, Eigen::VectorXd>> snapshots;  // sorted by index
  std::vector<int> newton_iters;                         // per step 1..N

  const Eigen::VectorXd& at(int n) const;
};

struct StepFailure : std::runtime_error {
  StepFailure(const std::string& msg, int step_index_, double residual_)
      : std::runtime_error(msg), step_index(step_index_), residual(residual_) {}
  int step_index;
  double residual;
};

// H_n = sum_{i=1..n} w_i (u_{n-i} - u_0); `past` holds u_1..u_{n-1} (the
// i = n term vanishes). Throws std::invalid_argument on a length mismatch.
Eigen::VectorXd history_term(const CqWeights& weights,
                             const std::vector<Eigen::VectorXd>& past,
                             const Eigen::VectorXd& u0, int n);

// Per-run immutable data shared by all steps: quadrature weights, correction
// coefficients, the correction source g0 = -S u0 + M f(u0), and the fixed
// splitting matrix w0 tau^{-alpha} M + S factored once.
class StepWorkspace {
 public:
  StepWorkspace(const StepperConfig& config, const OperatorPair& ops,
                const SemilinearRhs& rhs, const Eigen::VectorXd& u0);

  const CqWeights& weights() const { return weights_; }
  int last_newton_iters() const { return last_newton_iters_; }

 private:
  friend Eigen::VectorXd step(const StepperConfig&, const OperatorPair&,
                              const SemilinearRhs&,
                              const std::vector<Eigen::VectorXd>&, int,
                              StepWorkspace&);

  CqWeights weights_;
  CorrectionSet correction_;
  double tau_pow_;      // tau^{-alpha}
  double w0_scaled_;    // w_0 tau^{-alpha}
  double mass_norm_ = 0.0;   // ||M||_inf, for the residual roundoff floor
  double stiff_norm_ = 0.0;  // ||S||_inf
  Eigen::VectorXd g0_;  // correction source
  Eigen::SparseMatrix<double> mass_;
  Eigen::SparseMatrix<double> stiffness_;
  std::unique_ptr<SpdFactor> split_factor_;  // for w0 tau^{-alpha} M + S
  int last_newton_iters_ = 0;
};

// Solves the implicit equation of step n by Newton's method:
//   w0 tau^{-a} M (u_n - u_0) + tau^{-a} M H_n + S u_n - M f(u_n)
//     - [corrected, n <= k-1] a_n (-S u_0 + M f(u_0)) = 0,
// with Jacobian J(u) = w0 tau^{-a} M + S - M diag(f'(u)). `states` holds
// u_0..u_{n-1}. Initial guess is u_{n-1}. Convergence: residual
// infinity-norm <= max(newton_tol, roundoff floor of the residual
// evaluation) — on fine meshes the assembled terms reach ||S||_inf ~ 1/h^2
// and an absolute 1e-12 would be below what doubles can resolve. Throws
// StepFailure when Newton does not converge within
// config.newton_max_iter iterations.
Eigen::VectorXd step(const StepperConfig& config, const OperatorPair& ops,
                     const SemilinearRhs& rhs,
                     const std::vector<Eigen::VectorXd>& states, int n,
                     StepWorkspace& ws);

// Advances n = 1..N, recording snapshots at the requested indices (indices
// 0 and N are always included). Correction terms are active only for
// n <= k-1 and only when config.corrected is set.
Trajectory run(const StepperConfig& config, const OperatorPair& ops,
               const SemilinearRhs& rhs, const Eigen::VectorXd& u0,
               const std::vector<int>& snapshot_at = {});

}  // namespace fracstep

#endif  // FRACSTEP_STEPPER_HPP
