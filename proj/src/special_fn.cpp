#include "fracstep/special_fn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fracstep {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kXMax = 1e4;
constexpr double kXSmallPositive = 1.0;
constexpr int kSeriesCap = 600;

void check_params(const MlParams& p) {
  if (!(p.alpha > 0.0) || !(p.alpha <= 2.0)) {
    throw std::domain_error("Mittag-Leffler alpha must be in (0, 2]");
  }
  if (!(p.beta > 0.0) || !(p.beta <= 5.0)) {
    throw std::domain_error("Mittag-Leffler beta must be in (0, 5]");
  }
}

// Largest |x| for which the alternating Taylor series keeps the cancellation
// peak below ~1e2, i.e. |x|^{1/alpha} <= 6; capped at 5 when the integral
// route exists (alpha < 1).
double series_threshold(double alpha) {
  const double t = std::max(1.0, std::pow(6.0, alpha));
  return alpha < 1.0 ? std::min(5.0, t) : t;
}

double ml_series(double alpha, double beta, double x) {
  // Kahan-compensated sum of x^j / Gamma(alpha j + beta); term magnitudes
  // go through lgamma to dodge overflow at large j.
  double sum = 0.0, comp = 0.0;
  const double lax = x == 0.0 ? 0.0 : std::log(std::fabs(x));
  int tiny_streak = 0;
  for (int j = 0; j < kSeriesCap; ++j) {
    const double mag = std::exp(j * lax - std::lgamma(alpha * j + beta));
    const double term = (x < 0.0 && (j & 1)) ? -mag : mag;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (mag < 1e-17 * (1.0 + std::fabs(sum))) {
      if (++tiny_streak == 2 && j >= 4) {
        return sum;
      }
    } else {
      tiny_streak = 0;
    }
    if (x == 0.0) {
      return sum;
    }
  }
  throw std::domain_error("Mittag-Leffler series did not converge");
}

// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
// iteration on the Legendre polynomial.
struct GaussRule {
  std::array<double, 32> node;
  std::array<double, 32> weight;
};

const GaussRule& gauss32() {
  static const GaussRule rule = [] {
    GaussRule r{};
    const int n = 32;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / pp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) {
          break;
        }
      }
      r.node[i] = x;
      r.weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
  }();
  return rule;
}

// Real-axis integral representation for 0 < alpha < 1, beta < 1 + alpha,
// z < 0:
//   E = (1/(alpha pi)) int_0^inf r^{(1-beta)/alpha} exp(-r^{1/alpha})
//         [r sin(pi(1-beta)) - z sin(pi(1-beta+alpha))]
//         / (r^2 - 2 r z cos(alpha pi) + z^2) dr.
// The integrand decays like exp(-r^{1/alpha}); panels are graded dyadically
// toward r = 0 and refined around the Lorentzian bump at
// r* = |z cos(alpha pi)| when alpha -> 1 makes it narrow.
double ml_integral(double alpha, double beta, double z) {
  const double s1 = std::sin(kPi * (1.0 - beta));
  const double s2 = std::sin(kPi * (1.0 - beta + alpha));
  const double ca = std::cos(alpha * kPi);
  const auto kern = [&](double r) {
    const double num = r * s1 - z * s2;
    const double den = (r - z) * (r - z) - 2.0 * r * z * (ca - 1.0);
    const double power =
        (beta == 1.0) ? 1.0 : std::pow(r, (1.0 - beta) / alpha);
    return power * std::exp(-std::pow(r, 1.0 / alpha)) * num / den;
  };

  const double rmax = std::pow(45.0, alpha);
  std::vector<double> brk;
  brk.reserve(96);
  for (int j = 60; j >= 1; --j) {
    brk.push_back(rmax * std::ldexp(1.0, -j));
  }
  brk.push_back(rmax);
  if (alpha > 0.8 && ca < 0.0) {
    const double peak = -z * ca;        // z < 0, ca < 0
    const double width = -z * std::sin(alpha * kPi);
    if (peak < rmax) {
      for (double m : {-4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double p = peak + m * width;
        if (p > 0.0 && p < rmax) {
          brk.push_back(p);
        }
      }
      std::sort(brk.begin(), brk.end());
    }
  }

  const GaussRule& g = gauss32();
  // Leading-order value of the (0, r_min) stub, where the integrand behaves
  // like r^p (-s2/z) with p = (1-beta)/alpha in (-1, 0]; for beta near
  // 1 + alpha this stub carries an O(1) share of the integral.
  const double p = (1.0 - beta) / alpha;
  const double rmin = brk.front();
  double total = (-s2 / z) * std::pow(rmin, p + 1.0) / (p + 1.0);
  double lo = rmin;
  for (std::size_t b = 1; b < brk.size(); ++b) {
    const double hi = brk[b];
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double panel = 0.0;
    for (int i = 0; i < 32; ++i) {
      panel += g.weight[i] * kern(mid + half * g.node[i]);
    }
    total += panel * half;
    lo = hi;
  }
  return total / (alpha * kPi);
}

double ml_eval(double alpha, double beta, double x) {
  if (alpha == 1.0 && beta == 1.0) {
    return std::exp(x);
  }
  if (x >= -series_threshold(alpha)) {
    return ml_series(alpha, beta, x);
  }
  if (alpha >= 1.0) {
    throw std::domain_error(
        "Mittag-Leffler argument too negative for alpha >= 1");
  }
  // Lower beta into the integral's validity range beta < 1 + alpha.
  if (beta >= 1.0 + alpha) {
    return (ml_eval(alpha, beta - alpha, x) -
            1.0 / std::tgamma(beta - alpha)) /
           x;
  }
  return ml_integral(alpha, beta, x);
}

}  // namespace

double mittag_leffler(const MlParams& params, double x) {
  check_params(params);
  if (!(x >= -kXMax) || !(x <= kXSmallPositive)) {
    throw std::domain_error(
        "Mittag-Leffler argument must lie in [-1e4, 1]");
  }
  return ml_eval(params.alpha, params.beta, x);
}

double linear_mode_solution(double alpha, double lam, double t) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("linear mode requires alpha in (0, 1)");
  }
  if (lam < 0.0 || t < 0.0) {
    throw std::domain_error("linear mode requires lam >= 0 and t >= 0");
  }
  return mittag_leffler({alpha, 1.0}, -lam * std::pow(t, alpha));
}

}  // namespace fracstep
