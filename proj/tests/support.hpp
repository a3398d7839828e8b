#pragma once

// Independent reference formulas, random draws and numeric helpers shared by
// the test binaries. Nothing here calls into the library under test, so the
// library can be checked against it.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>

namespace testing_support {

/// Reference setup written out longhand (linear units).
struct Setup {
  long double D = 100, H = 10, beta = 3;
  long double P_b = 0.1L, P_r = 0.1L;
  long double rho0 = 1e-6L;          // -60 dB
  long double n0 = 1.2589254117941673e-20L;  // -169 dBm/Hz in W/Hz
  long double W = 1e6L, mu = 40;
  long double a1 = 0.3980L, a2 = 0.5385L, c1 = 0.2815L, c2 = -1.3135L;
  long double K = 4, eps_bar = 0.9L;
};

inline long double ref_snr_lin(const Setup& s, long double power, long double d,
                               long double bw) {
  return power * s.rho0 / (std::pow(d * d + s.H * s.H, s.beta / 2) * bw * s.n0);
}

inline long double ref_snr_db(const Setup& s, long double d, long double alpha) {
  return 10 * std::log10(ref_snr_lin(s, s.P_b, d, alpha * s.W));
}

inline long double ref_similarity(const Setup& s, long double g) {
  return s.a1 + s.a2 / (1 + std::exp(-(s.c1 * g + s.c2)));
}

inline long double ref_bit_rate(const Setup& s, long double power, long double d,
                                long double alpha) {
  const long double bw = alpha * s.W;
  return bw * std::log2(1 + ref_snr_lin(s, power, d, bw));
}

/// Effective rate from first principles; negative when the similarity floor
/// is missed.
inline long double ref_eta(const Setup& s, long double d_br, long double a_br) {
  const long double eps = ref_similarity(s, ref_snr_db(s, d_br, a_br));
  if (eps < s.eps_bar) return -1;
  const long double sem = s.mu * a_br * s.W * eps / s.K;
  return std::min(sem, ref_bit_rate(s, s.P_r, s.D - d_br, 1 - a_br));
}

/// Threshold SNR by bisection on the sigmoid, not by its closed-form inverse.
inline long double bisect_threshold(const Setup& s) {
  long double lo = -200, hi = 200;
  for (int i = 0; i < 200; ++i) {
    const long double mid = (lo + hi) / 2;
    (ref_similarity(s, mid) >= s.eps_bar ? hi : lo) = mid;
  }
  return hi;
}

inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

/// Maximiser of a unimodal function on [lo, hi].
inline double golden_max(const std::function<double(double)>& f, double lo,
                         double hi, int iters = 200) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    }
  }
  return (a + b) / 2;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing_support
