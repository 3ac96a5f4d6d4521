#ifndef FRACSTEP_CQ_KERNEL_HPP
#define FRACSTEP_CQ_KERNEL_HPP

#include <vector>

namespace fracstep {

// Coefficients c_0..c_k of the k-step backward-difference generating
// polynomial delta(x) = sum_{i=1..k} (1/i)(1-x)^i, expanded in powers of x.
// delta(1) = 0, so the coefficients sum to zero; c_0 is the k-th harmonic
// number and is strictly positive.
struct BdfDelta {
  int k;
  std::vector<double> coeffs;
};

// Convolution-quadrature weights w_0..w_N: the power-series coefficients of
// delta(x)^alpha. They are dimensionless; the tau^{-alpha} scaling of the
// discrete fractional derivative is applied by the time stepper.
struct CqWeights {
  int k;
  double alpha;
  std::vector<double> weights;
};

// Starting-step correction coefficients a_1..a_{k-1} (empty for k = 1),
// applied to the history-free part of the right-hand side during the first
// k-1 steps to restore order-k accuracy for solutions with limited
// smoothness at t = 0.
struct CorrectionSet {
  int k;
  std::vector<double> coeffs;
};

// Expansion of delta(x) assembled from exact rational arithmetic on binomial
// coefficients. Throws std::domain_error unless 1 <= k <= 6.
BdfDelta bdf_delta_coeffs(int k);

// Weights via the Miller power recurrence:
//   w_0 = c_0^alpha,
//   w_n = (1/(n c_0)) * sum_{j=1..min(n,k)} ((alpha+1)j - n) c_j w_{n-j}.
// Throws std::domain_error unless 1 <= k <= 6, 0 < alpha <= 1, n_max >= 0.
CqWeights cq_weights(int k, double alpha, int n_max);

// Same weights computed by sampling delta(x)^alpha on a circle of radius
// rho < 1 and inverting the discrete Fourier transform; serves as an
// independent cross-check of the recurrence. Same preconditions.
CqWeights cq_weights_fft(int k, double alpha, int n_max);

// Hard-coded correction-coefficient table. Throws std::domain_error unless
// 1 <= k <= 6.
CorrectionSet correction_coeffs(int k);

}  // namespace fracstep

#endif  // FRACSTEP_CQ_KERNEL_HPP
