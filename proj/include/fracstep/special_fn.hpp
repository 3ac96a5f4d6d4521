#ifndef FRACSTEP_SPECIAL_FN_HPP
#define FRACSTEP_SPECIAL_FN_HPP

namespace fracstep {

// Parameters of the two-parameter Mittag-Leffler function
// E_{alpha,beta}(x) = sum_{j>=0} x^j / Gamma(alpha j + beta).
// Supported range: alpha in (0, 2], beta in (0, 5].
struct MlParams {
  double alpha;
  double beta;
};

// Evaluates E_{alpha,beta}(x) for real x in [-1e4, 1] with absolute error
// <= 1e-11. Strategy:
//   - Kahan-summed Taylor series where cancellation is provably harmless
//     (x >= -min(5, 6^alpha) for alpha < 1; the full negative range reachable
//     for alpha >= 1 is |x| <= 6^alpha).
//   - A real-axis integral representation (Gauss-Legendre panels) for more
//     negative arguments when 0 < alpha < 1, after lowering beta into its
//     validity range beta < 1 + alpha via
//     E_{a,b}(x) = (E_{a,b-a}(x) - 1/Gamma(b-a)) / x.
// Throws std::domain_error for parameters or arguments outside the
// supported set (in particular x < -6^alpha with alpha >= 1, beta != 1).
double mittag_leffler(const MlParams& params, double x);

// Exact amplitude E_{alpha,1}(-lam t^alpha) of the single-mode linear
// relaxation problem d^alpha y/dt^alpha = -lam y, y(0) = 1.
// Requires alpha in (0,1), lam >= 0, t >= 0; errors propagate from
// mittag_leffler.
double linear_mode_solution(double alpha, double lam, double t);

}  // namespace fracstep

#endif  // FRACSTEP_SPECIAL_FN_HPP
