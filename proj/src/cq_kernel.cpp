#include "fracstep/cq_kernel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fracstep {

namespace {

void check_k(int k) {
  if (k < 1 || k > 6) {
    throw std::domain_error("step count k must be in 1..6");
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    throw std::domain_error("fractional order alpha must be in (0, 1]");
  }
}

long long binomial(int n, int j) {
  long long b = 1;
  for (int i = 1; i <= j; ++i) {
    b = b * (n - j + i) / i;
  }
  return b;
}

// In-place radix-2 transform, sign = -1 for the forward convention
// X_m = sum_l x_l exp(sign * 2 pi i l m / L). Length must be a power of two.
void fft_pow2(std::vector<std::complex<long double>>& a, int sign) {
  const std::size_t L = a.size();
  for (std::size_t i = 1, j = 0; i < L; ++i) {
    std::size_t bit = L >> 1;
    for (; j & bit; bit >>= 1) {
      j ^= bit;
    }
    j ^= bit;
    if (i < j) {
      std::swap(a[i], a[j]);
    }
  }
  const long double pi = 3.14159265358979323846264338327950288L;
  for (std::size_t len = 2; len <= L; len <<= 1) {
    const long double ang = sign * 2.0L * pi / static_cast<long double>(len);
    const std::complex<long double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < L; i += len) {
      std::complex<long double> w(1.0L, 0.0L);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const auto u = a[i + j];
        const auto v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace

BdfDelta bdf_delta_coeffs(int k) {
  check_k(k);
  // 60 is divisible by every i <= 6, so each coefficient is an exact
  // integer divided by 60.
  BdfDelta d{k, std::vector<double>(k + 1, 0.0)};
  for (int j = 0; j <= k; ++j) {
    long long num = 0;
    const long long sign = (j % 2 == 0) ? 1 : -1;
    for (int i = std::max(j, 1); i <= k; ++i) {
      num += (60 / i) * binomial(i, j) * sign;
    }
    d.coeffs[j] = static_cast<double>(num) / 60.0;
  }
  return d;
}

CqWeights cq_weights(int k, double alpha, int n_max) {
  check_k(k);
  check_alpha(alpha);
  if (n_max < 0) {
    throw std::domain_error("n_max must be nonnegative");
  }
  const BdfDelta d = bdf_delta_coeffs(k);
  const double c0 = d.coeffs[0];
  CqWeights w{k, alpha, std::vector<double>(n_max + 1, 0.0)};
  w.weights[0] = std::pow(c0, alpha);
  for (int n = 1; n <= n_max; ++n) {
    double acc = 0.0;
    const int jmax = std::min(n, k);
    for (int j = 1; j <= jmax; ++j) {
      acc += ((alpha + 1.0) * j - n) * d.coeffs[j] * w.weights[n - j];
    }
    w.weights[n] = acc / (n * c0);
  }
  return w;
}

CqWeights cq_weights_fft(int k, double alpha, int n_max) {
  check_k(k);
  check_alpha(alpha);
  if (n_max < 0) {
    throw std::domain_error("n_max must be nonnegative");
  }
  const BdfDelta d = bdf_delta_coeffs(k);

  std::size_t L = 8;
  while (L < 4 * static_cast<std::size_t>(n_max + 1)) {
    L <<= 1;
  }
  // Radius trade-off: rho^{-n} amplifies sampling roundoff while rho^L
  // controls aliasing from coefficients beyond n_max. rho^{n_max} ~ 1e-3
  // with long-double accumulation keeps both far below 1e-12.
  const double rho =
      std::min(0.999, std::max(0.5, std::pow(10.0, -3.0 / (n_max + 1))));

  std::vector<std::complex<long double>> samples(L);
  const long double pi = 3.14159265358979323846264338327950288L;
  for (std::size_t l = 0; l < L; ++l) {
    const long double theta = 2.0L * pi * static_cast<long double>(l) /
                              static_cast<long double>(L);
    const std::complex<long double> xi =
        static_cast<long double>(rho) *
        std::complex<long double>(std::cos(theta), std::sin(theta));
    std::complex<long double> p(0.0L, 0.0L);
    for (int j = k; j >= 0; --j) {
      p = p * xi + static_cast<long double>(d.coeffs[j]);
    }
    samples[l] = std::pow(p, static_cast<long double>(alpha));
  }
  fft_pow2(samples, -1);

  CqWeights w{k, alpha, std::vector<double>(n_max + 1, 0.0)};
  long double rinv = 1.0L;  // rho^{-n}
  for (int n = 0; n <= n_max; ++n) {
    w.weights[n] = static_cast<double>(
        samples[n].real() * rinv / static_cast<long double>(L));
    rinv /= static_cast<long double>(rho);
  }
  return w;
}

CorrectionSet correction_coeffs(int k) {
  check_k(k);
  struct Rational {
    long long num, den;
  };
  static const std::vector<std::vector<Rational>> table = {
      {},                                                            // k = 1
      {{1, 2}},                                                      // k = 2
      {{11, 12}, {-5, 12}},                                          // k = 3
      {{31, 24}, {-7, 6}, {3, 8}},                                   // k = 4
      {{1181, 720}, {-177, 80}, {341, 240}, {-251, 720}},            // k = 5
      {{2837, 1440}, {-2543, 720}, {17, 5}, {-1201, 720}, {95, 288}}  // k = 6
  };
  CorrectionSet c{k, {}};
  c.coeffs.reserve(k - 1);
  for (const auto& r : table[k - 1]) {
    c.coeffs.push_back(static_cast<double>(r.num) /
                       static_cast<double>(r.den));
  }
  return c;
}

}  // namespace fracstep
