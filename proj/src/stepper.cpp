#include "fracstep/stepper.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fracstep {

namespace {

void check_config(const StepperConfig& c) {
  if (c.k < 1 || c.k > 6) {
    throw std::invalid_argument("stepper: k must be in 1..6");
  }
  if (c.N < c.k) {
    throw std::invalid_argument("stepper: need N >= k steps");
  }
  if (!(c.T > 0.0)) {
    throw std::invalid_argument("stepper: final time must be positive");
  }
  if (!(c.alpha > 0.0) || !(c.alpha <= 1.0)) {
    throw std::invalid_argument("stepper: alpha must be in (0, 1]");
  }
  if (!(c.newton_tol > 0.0) || c.newton_max_iter < 1) {
    throw std::invalid_argument("stepper: invalid Newton settings");
  }
}

Eigen::VectorXd apply_nodal(const std::function<double(double)>& f,
                            const Eigen::VectorXd& u) {
  Eigen::VectorXd out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    out[i] = f(u[i]);
  }
  return out;
}

// H = sum_{i=1..n-1} w_i (u_{n-i} - u_0), with u_{n-i} = lookup(n-i).
// The subtracted form keeps a constant history at exactly zero.
template <typename Lookup>
Eigen::VectorXd accumulate_history(const CqWeights& weights,
                                   const Eigen::VectorXd& u0, int n,
                                   Lookup&& lookup) {
  Eigen::VectorXd H = Eigen::VectorXd::Zero(u0.size());
  for (int i = 1; i <= n - 1; ++i) {
    H.noalias() += weights.weights[i] * (lookup(n - i) - u0);
  }
  return H;
}

}  // namespace

const Eigen::VectorXd& Trajectory::at(int n) const {
  for (const auto& [idx, v] : snapshots) {
    if (idx == n) {
      return v;
    }
  }
  throw std::out_of_range("trajectory holds no snapshot at step " +
                          std::to_string(n));
}

Eigen::VectorXd history_term(const CqWeights& weights,
                             const std::vector<Eigen::VectorXd>& past,
                             const Eigen::VectorXd& u0, int n) {
  if (n < 1) {
    throw std::invalid_argument("history_term: n must be >= 1");
  }
  if (static_cast<int>(past.size()) != n - 1) {
    throw std::invalid_argument("history_term: expected exactly u_1..u_{n-1}");
  }
  if (static_cast<int>(weights.weights.size()) < n + 1) {
    throw std::invalid_argument("history_term: not enough weights");
  }
  // The i = n term is w_n (u_0 - u_0) = 0, so the sum stops at n-1.
  return accumulate_history(
      weights, u0, n,
      [&](int idx) -> const Eigen::VectorXd& { return past[idx - 1]; });
}

namespace {

// Max absolute row sum (the operator infinity-norm).
double row_sum_norm(const Eigen::SparseMatrix<double>& A) {
  if (A.rows() == 0) {
    return 0.0;
  }
  Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(A.rows());
  for (int c = 0; c < A.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it) {
      rowsum[it.row()] += std::abs(it.value());
    }
  }
  return rowsum.maxCoeff();
}

}  // namespace

StepWorkspace::StepWorkspace(const StepperConfig& config,
                             const OperatorPair& ops, const SemilinearRhs& rhs,
                             const Eigen::VectorXd& u0)
    : weights_(cq_weights(config.k, config.alpha, config.N)),
      correction_(correction_coeffs(config.k)),
      tau_pow_(std::pow(config.tau(), -config.alpha)),
      w0_scaled_(weights_.weights[0] * std::pow(config.tau(), -config.alpha)),
      mass_(ops.mass.to_eigen()),
      stiffness_(ops.stiffness.to_eigen()) {
  mass_norm_ = row_sum_norm(mass_);
  stiff_norm_ = row_sum_norm(stiffness_);
  g0_ = -(stiffness_ * u0) + mass_ * apply_nodal(rhs.f, u0);
  // w0 tau^{-alpha} M + S is symmetric positive definite for any tau;
  // one factorization serves every splitting solve of the run.
  const Eigen::SparseMatrix<double> J0 = w0_scaled_ * mass_ + stiffness_;
  split_factor_ = std::make_unique<SpdFactor>(J0);
}

Eigen::VectorXd step(const StepperConfig& config, const OperatorPair& ops,
                     const SemilinearRhs& rhs,
                     const std::vector<Eigen::VectorXd>& states, int n,
                     StepWorkspace& ws) {
  if (n < 1 || static_cast<int>(states.size()) != n) {
    throw std::invalid_argument("step: states must hold u_0..u_{n-1}");
  }
  const Eigen::VectorXd& u0 = states.front();
  const Eigen::VectorXd H = accumulate_history(
      ws.weights_, u0, n,
      [&](int idx) -> const Eigen::VectorXd& { return states[idx]; });

  // Constant part of the residual F(u) = w0 tau^{-a} M u + S u - M f(u) - C:
  //   C = w0 tau^{-a} M u0 - tau^{-a} M H + a_n g0.
  Eigen::VectorXd C = ws.w0_scaled_ * (ws.mass_ * u0);
  C.noalias() -= ws.tau_pow_ * (ws.mass_ * H);
  if (config.corrected && n <= config.k - 1) {
    C.noalias() += ws.correction_.coeffs[n - 1] * ws.g0_;
  }

  Eigen::VectorXd u = states.back();  // initial guess u_{n-1}

  // The residual is assembled from terms of magnitude up to
  // ||S||_inf ||u||_inf and w0 tau^{-a} ||M||_inf ||u||_inf (the history sum
  // contributes ~sqrt(n) of the latter), so its evaluation carries an
  // irreducible floating-point floor of that scale times machine epsilon.
  // Demanding less than the floor would loop forever on roundoff noise; the
  // convergence threshold is therefore newton_tol or the floor, whichever
  // is larger.
  const double umax = std::max(u.lpNorm<Eigen::Infinity>(),
                               u0.lpNorm<Eigen::Infinity>());
  const double fp_floor =
      8.0 * std::numeric_limits<double>::epsilon() *
      (ws.stiff_norm_ +
       ws.w0_scaled_ * ws.mass_norm_ * (2.0 + std::sqrt(double(n)))) *
      umax;
  const double tol = std::max(config.newton_tol, fp_floor);

  double res_norm = 0.0;
  bool try_direct = true;  // until the true Jacobian turns out indefinite
  for (int iter = 1; iter <= config.newton_max_iter; ++iter) {
    const Eigen::VectorXd fu = apply_nodal(rhs.f, u);
    Eigen::VectorXd F = ws.w0_scaled_ * (ws.mass_ * u);
    F.noalias() += ws.stiffness_ * u;
    F.noalias() -= ws.mass_ * fu;
    F -= C;
    res_norm = F.lpNorm<Eigen::Infinity>();
    if (res_norm <= tol) {
      ws.last_newton_iters_ = iter;
      return u;
    }

    const Eigen::VectorXd fp = apply_nodal(rhs.f_prime, u);
    bool took_direct = false;
    if (ops.identity_mass && try_direct) {
      // J = w0 tau^{-a} I + S - diag(f') is symmetric; it is positive
      // definite whenever w0 tau^{-a} exceeds max f', and usually well below
      // that too because the stiffness spectrum shifts it up. Attempt the
      // Cholesky factorization — it detects indefiniteness reliably — and
      // take the exact Newton direction when it succeeds.
      Eigen::SparseMatrix<double> J = ws.stiffness_;
      for (int i = 0; i < J.rows(); ++i) {
        J.coeffRef(i, i) += ws.w0_scaled_ - fp[i];
      }
      Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(J);
      if (llt.info() == Eigen::Success) {
        u += llt.solve(-F);
        took_direct = true;
      } else {
        try_direct = false;  // indefinite near this iterate; split instead
      }
    }
    if (!took_direct) {
      // Fixed-matrix splitting: solve (J0 - M diag(f')) d = -F by iterating
      // d <- J0^{-1} (-F + M (f' o d)) with the factorization of
      // J0 = w0 tau^{-a} M + S computed once per run. The iteration
      // contracts when w0 tau^{-a} plus the smallest generalized stiffness
      // eigenvalue dominates f'; transient growth alone is not divergence
      // (the iteration matrix is non-normal), so failure is declared only
      // on blow-up or on exhausting the iteration cap.
      Eigen::VectorXd d = ws.split_factor_->solve(-F);
      const double blowup =
          1e12 * std::max(1.0, d.lpNorm<Eigen::Infinity>());
      bool converged = false;
      for (int m = 0; m < 800; ++m) {
        const Eigen::VectorXd d_next =
            ws.split_factor_->solve(-F + ws.mass_ * fp.cwiseProduct(d));
        const double change = (d_next - d).lpNorm<Eigen::Infinity>();
        d = d_next;
        const double dn = std::max(1.0, d.lpNorm<Eigen::Infinity>());
        if (!std::isfinite(change) || change > blowup) {
          throw StepFailure(
              "step " + std::to_string(n) +
                  ": splitting iteration diverged (tau too large for the "
                  "contraction regime)",
              n, res_norm);
        }
        // Stop on stationarity; the iterates may limit-cycle a few ulps
        // wide, so roundoff-level progress also counts as stationary. The
        // outer Newton residual check still validates the result.
        if (change <= 1e-15 * dn || (m >= 3 && change <= 1e-9 * dn)) {
          converged = true;
          break;
        }
      }
      if (!converged) {
        throw StepFailure(
            "step " + std::to_string(n) +
                ": splitting iteration did not contract within its "
                "iteration cap (tau too large for the contraction regime)",
            n, res_norm);
      }
      u += d;
    }
  }
  throw StepFailure(
      "step " + std::to_string(n) + ": Newton did not converge (residual " +
          std::to_string(res_norm) + ")",
      n, res_norm);
}

Trajectory run(const StepperConfig& config, const OperatorPair& ops,
               const SemilinearRhs& rhs, const Eigen::VectorXd& u0,
               const std::vector<int>& snapshot_at) {
  check_config(config);
  if (!u0.allFinite()) {
    throw std::invalid_argument("run: initial vector must be finite");
  }

  std::vector<int> wanted = snapshot_at;
  wanted.push_back(0);
  wanted.push_back(config.N);
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  for (int idx : wanted) {
    if (idx < 0 || idx > config.N) {
      throw std::invalid_argument("run: snapshot index out of range");
    }
  }

  StepWorkspace ws(config, ops, rhs, u0);
  Trajectory traj;
  traj.times.reserve(config.N + 1);
  for (int nn = 0; nn <= config.N; ++nn) {
    traj.times.push_back(nn * config.tau());
  }
  traj.newton_iters.reserve(config.N);

  std::vector<Eigen::VectorXd> states;
  states.reserve(config.N + 1);
  states.push_back(u0);
  for (int nn = 1; nn <= config.N; ++nn) {
    states.push_back(step(config, ops, rhs, states, nn, ws));
    traj.newton_iters.push_back(ws.last_newton_iters());
  }
  for (int idx : wanted) {
    traj.snapshots.emplace_back(idx, states[idx]);
  }
  return traj;
}

}  // namespace fracstep
