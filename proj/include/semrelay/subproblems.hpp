#pragma once

// The three blocks of one coordinate-ascent cycle on the penalised problem:
//
//   placement  - (d_br, d_ru, gamma, eta) with the bandwidth split fixed
//   bandwidth  - (alpha_br, alpha_ru, gamma, S, eta) with placement fixed
//   auxiliary  - projection of the primal copies onto the two sum constraints
//
// The first two are convex programs built from the tangent surrogates in
// sca_bounds.hpp and solved with the dense barrier method. Rates inside the
// programs are normalised by W (bit/s/Hz); results are reported in bit/s.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "semrelay/barrier.hpp"
#include "semrelay/sca_bounds.hpp"
#include "semrelay/system_model.hpp"

namespace semrelay {

/// Copies of the placement and bandwidth variables that carry the sum
/// constraints d_br + d_ru = D and alpha_br + alpha_ru = 1.
struct Auxiliaries {
  double d_br = 0.0;
  double d_ru = 0.0;
  double alpha_br = 0.0;
  double alpha_ru = 0.0;

  bool operator==(const Auxiliaries&) const = default;
};

enum class SubproblemStatus { kOptimal, kMaxIterations, kInfeasible };

struct SubproblemSolution {
  DesignPoint point;    // block variables updated, others carried over
  double S = 0.0;       // similarity slack (bandwidth block only)
  double objective = 0.0;  // penalised surrogate objective [bit/s]
  SubproblemStatus status = SubproblemStatus::kInfeasible;
  int newton_iterations = 0;
};

namespace detail {

struct PathLossDerivs {
  double u = 0.0, du = 0.0, d2u = 0.0;
};

inline PathLossDerivs path_loss_derivs(double d, double H, double beta) {
  const double r2 = d * d + H * H;
  const double k = beta / 2.0;
  PathLossDerivs r;
  r.u = std::pow(r2, k);
  if (r2 == 0.0) {
    r.d2u = beta == 2.0 ? 2.0 : 0.0;
    return r;
  }
  r.du = beta * d * std::pow(r2, k - 1.0);
  r.d2u = beta * std::pow(r2, k - 1.0) +
          beta * (beta - 2.0) * d * d * std::pow(r2, k - 2.0);
  return r;
}

inline SubproblemStatus to_status(barrier::Status s) {
  switch (s) {
    case barrier::Status::kOptimal:
      return SubproblemStatus::kOptimal;
    case barrier::Status::kMaxIterations:
      return SubproblemStatus::kMaxIterations;
    case barrier::Status::kInfeasibleStart:
      break;
  }
  return SubproblemStatus::kInfeasible;
}

/// Ceiling on the normalised rate that keeps the feasible set bounded.
inline double rate_ceiling(const SystemParams& p, const SigmoidFit& fit) {
  return 1.01 * p.mu * (fit.a1 + fit.a2) / fit.K;
}

/// Placement program over x = (d_br, d_ru, gamma_db, eta/W).
struct PlacementProgram {
  static constexpr int kDim = 4;
  static constexpr std::size_t kConstraints = 9;
  using V = barrier::Vec<kDim>;
  using F = barrier::SecondOrder<kDim>;

  double D = 0, H = 0, beta = 0;
  double alpha_ru = 0;
  sca::RuRateCoeffs ru;
  double sem_scale = 0;  // alpha_br * mu / K
  double a1 = 0, a2 = 0, c1 = 0, c2 = 0;
  sca::LogisticCoeffs logi;
  double snr_no_path_db = 0;  // 10 log10(P_b rho0 / (alpha_br W N0))
  sca::LogDistanceCoeffs logd;
  double d_br_t = 0;
  double gamma_min = 0;
  double eta_cap = 0;
  double pen = 0;  // nu / (2 lambda W)
  double dhat_br = 0, dhat_ru = 0;

  double gamma_ceiling(double d_br) const {
    return snr_no_path_db -
           5.0 * beta * (logd.E5 + logd.E6 * (d_br * d_br - d_br_t * d_br_t));
  }
  double ru_rate(double d_ru) const {
    return alpha_ru * (ru.E1 - ru.E2 * (std::pow(d_ru * d_ru + H * H, beta / 2) - ru.u_t));
  }
  double sem_rate(double gamma) const {
    const double e = std::exp(-(c1 * gamma + c2));
    return sem_scale * (a1 + a2 * (logi.E_lin - logi.E_quad * (e - logi.exp_t)));
  }

  double objective_value(const V& x) const {
    const double a = x[0] - dhat_br, b = x[1] - dhat_ru;
    return x[3] - pen * (a * a + b * b);
  }
  F objective(const V& x) const {
    F f;
    f.value = objective_value(x);
    f.grad << -2 * pen * (x[0] - dhat_br), -2 * pen * (x[1] - dhat_ru), 0, 1;
    f.hess(0, 0) = f.hess(1, 1) = -2 * pen;
    return f;
  }

  std::array<double, kConstraints> constraint_values(const V& x) const {
    return {x[3] - ru_rate(x[1]),
            x[3] - sem_rate(x[2]),
            x[2] - gamma_ceiling(x[0]),
            gamma_min - x[2],
            -x[0],
            -x[1],
            x[0] - D,
            x[1] - D,
            x[3] - eta_cap};
  }

  std::array<F, kConstraints> constraints(const V& x) const {
    const auto vals = constraint_values(x);
    std::array<F, kConstraints> c;
    for (std::size_t i = 0; i < kConstraints; ++i) c[i].value = vals[i];

    const auto pl = path_loss_derivs(x[1], H, beta);
    c[0].grad << 0, alpha_ru * ru.E2 * pl.du, 0, 1;
    c[0].hess(1, 1) = alpha_ru * ru.E2 * pl.d2u;

    const double e = std::exp(-(c1 * x[2] + c2));
    const double k = sem_scale * a2 * logi.E_quad;
    c[1].grad << 0, 0, -k * c1 * e, 1;
    c[1].hess(2, 2) = k * c1 * c1 * e;

    c[2].grad << 10.0 * beta * logd.E6 * x[0], 0, 1, 0;
    c[2].hess(0, 0) = 10.0 * beta * logd.E6;

    c[3].grad << 0, 0, -1, 0;
    c[4].grad << -1, 0, 0, 0;
    c[5].grad << 0, -1, 0, 0;
    c[6].grad << 1, 0, 0, 0;
    c[7].grad << 0, 1, 0, 0;
    c[8].grad << 0, 0, 0, 1;
    return c;
  }
};

/// Bandwidth program over x = (alpha_br, alpha_ru, gamma_db, S, eta/W).
struct BandwidthProgram {
  static constexpr int kDim = 5;
  static constexpr std::size_t kConstraints = 10;
  using V = barrier::Vec<kDim>;
  using F = barrier::SecondOrder<kDim>;

  double q_ru = 0;  // relay->user SNR at full band
  double k4 = 0;    // mu / (4K)
  double sum_t = 0; // alpha_br_t + S_t
  double a1 = 0, a2 = 0, c1 = 0, c2 = 0;
  sca::LogisticCoeffs logi;
  double snr_full_band_db = 0;  // 10 log10(P_b rho0 / (L(d_br) W N0))
  sca::LogBandwidthCoeffs logb;
  double alpha_t = 0;
  double gamma_min = 0;
  double alpha_floor = kAlphaFloor;
  double eta_cap = 0;
  double pen = 0;  // 1 / (2 lambda W)
  double ahat_br = 0, ahat_ru = 0;

  double ru_rate(double a) const {
    return a * std::log1p(q_ru / a) / std::numbers::ln2;
  }
  double product_bound(double a_br, double S) const {
    const double diff = a_br - S;
    return k4 * (-sum_t * sum_t + 2.0 * sum_t * (a_br + S) - diff * diff);
  }
  double similarity_ceiling(double gamma) const {
    const double e = std::exp(-(c1 * gamma + c2));
    return a1 + a2 * (logi.E_lin - logi.E_quad * (e - logi.exp_t));
  }
  double gamma_ceiling(double a_br) const {
    return snr_full_band_db - logb.E9 - logb.E10 * (a_br - alpha_t);
  }

  double objective_value(const V& x) const {
    const double a = x[0] - ahat_br, b = x[1] - ahat_ru;
    return x[4] - pen * (a * a + b * b);
  }
  F objective(const V& x) const {
    F f;
    f.value = objective_value(x);
    f.grad << -2 * pen * (x[0] - ahat_br), -2 * pen * (x[1] - ahat_ru), 0, 0, 1;
    f.hess(0, 0) = f.hess(1, 1) = -2 * pen;
    return f;
  }

  std::array<double, kConstraints> constraint_values(const V& x) const {
    return {x[4] - ru_rate(x[1]),
            x[4] - product_bound(x[0], x[3]),
            x[3] - similarity_ceiling(x[2]),
            x[2] - gamma_ceiling(x[0]),
            gamma_min - x[2],
            alpha_floor - x[0],
            alpha_floor - x[1],
            x[0] - 1.0,
            x[1] - 1.0,
            x[4] - eta_cap};
  }

  std::array<F, kConstraints> constraints(const V& x) const {
    const auto vals = constraint_values(x);
    std::array<F, kConstraints> c;
    for (std::size_t i = 0; i < kConstraints; ++i) c[i].value = vals[i];

    const double a = x[1];
    const double ratio = q_ru / a;
    const double h1 = std::log1p(ratio) / std::numbers::ln2 -
                      q_ru * std::numbers::log2e / (a + q_ru);
    const double h2 = -std::numbers::log2e * q_ru * q_ru / (a * (a + q_ru) * (a + q_ru));
    c[0].grad << 0, -h1, 0, 0, 1;
    c[0].hess(1, 1) = -h2;

    const double diff = x[0] - x[3];
    c[1].grad << -k4 * (2 * sum_t - 2 * diff), 0, 0, -k4 * (2 * sum_t + 2 * diff), 1;
    c[1].hess(0, 0) = c[1].hess(3, 3) = 2 * k4;
    c[1].hess(0, 3) = c[1].hess(3, 0) = -2 * k4;

    const double e = std::exp(-(c1 * x[2] + c2));
    c[2].grad << 0, 0, -a2 * logi.E_quad * c1 * e, 1, 0;
    c[2].hess(2, 2) = a2 * logi.E_quad * c1 * c1 * e;

    c[3].grad << logb.E10, 0, 1, 0, 0;
    c[4].grad << 0, 0, -1, 0, 0;
    c[5].grad << -1, 0, 0, 0, 0;
    c[6].grad << 0, -1, 0, 0, 0;
    c[7].grad << 1, 0, 0, 0, 0;
    c[8].grad << 0, 1, 0, 0, 0;
    c[9].grad << 0, 0, 0, 0, 1;
    return c;
  }
};

/// Strictly interior rate start below every rate ceiling.
inline double interior_rate(double ceiling) {
  return ceiling - 1e-3 * std::max(1.0, std::abs(ceiling));
}

}  // namespace detail

/// Maximises the penalised surrogate placement program at a fixed bandwidth
/// split. Returns kInfeasible when no d_br in [0, D] meets the SNR floor under
/// the surrogate SNR ceiling.
inline SubproblemSolution solve_placement(const SystemParams& p,
                                          const SigmoidFit& fit,
                                          const sca::LocalPoint& lp,
                                          double alpha_br, double alpha_ru,
                                          const Auxiliaries& aux,
                                          double lambda, double nu,
                                          const barrier::Options& opt = {}) {
  detail::PlacementProgram prog;
  prog.D = p.D;
  prog.H = p.H;
  prog.beta = p.beta;
  prog.alpha_ru = alpha_ru;
  prog.ru = sca::lemma1_coefficients(p, lp, alpha_ru);
  prog.sem_scale = alpha_br * p.mu / fit.K;
  prog.a1 = fit.a1;
  prog.a2 = fit.a2;
  prog.c1 = fit.c1;
  prog.c2 = fit.c2;
  prog.logi = sca::lemma2_coefficients(fit, lp);
  prog.snr_no_path_db =
      linear_to_db(p.P_b * p.rho0() / (alpha_br * p.W * p.n0()));
  prog.logd = sca::lemma3_coefficients(lp, p.H);
  prog.d_br_t = lp.d_br_t;
  prog.gamma_min = min_snr_threshold_db(fit);
  prog.eta_cap = detail::rate_ceiling(p, fit);
  prog.pen = nu / (2.0 * lambda * p.W);
  prog.dhat_br = aux.d_br;
  prog.dhat_ru = aux.d_ru;

  SubproblemSolution sol;
  sol.point.alpha_br = alpha_br;
  sol.point.alpha_ru = alpha_ru;
  sol.point.d_br = lp.d_br_t;
  sol.point.d_ru = lp.d_ru_t;
  sol.point.gamma_br_db = lp.gamma_br_t;

  const double top = prog.gamma_ceiling(0.0);
  if (!(top > prog.gamma_min)) return sol;

  const double margin = 1e-3 * p.D;
  double d_br = std::clamp(lp.d_br_t, margin, p.D - margin);
  if (!(prog.gamma_ceiling(d_br) > prog.gamma_min + 1e-9)) {
    // Relay too far for the SNR floor: move to where the ceiling sits halfway
    // between the floor and its maximum.
    const double target = prog.gamma_min + 0.5 * (top - prog.gamma_min);
    const double d2 = lp.d_br_t * lp.d_br_t +
                      ((prog.snr_no_path_db - target) / (5.0 * p.beta) -
                       prog.logd.E5) / prog.logd.E6;
    d_br = std::min(std::sqrt(std::max(d2, 0.0)), p.D - margin);
  }
  const double d_ru = std::clamp(lp.d_ru_t, margin, p.D - margin);
  const double ceiling = prog.gamma_ceiling(d_br);
  const double gamma = ceiling - 0.5 * (ceiling - prog.gamma_min);
  const double eta = detail::interior_rate(
      std::min({prog.ru_rate(d_ru), prog.sem_rate(gamma), prog.eta_cap}));

  detail::PlacementProgram::V x0;
  x0 << d_br, d_ru, gamma, eta;
  const auto res = barrier::maximize(prog, x0, opt);
  sol.status = detail::to_status(res.status);
  sol.newton_iterations = res.newton_iterations;
  if (sol.status == SubproblemStatus::kInfeasible) return sol;

  sol.point.d_br = res.x[0];
  sol.point.d_ru = res.x[1];
  sol.point.gamma_br_db = res.x[2];
  sol.point.eta = res.x[3] * p.W;
  sol.objective = res.objective * p.W;
  return sol;
}

/// Maximises the penalised surrogate bandwidth program at a fixed placement.
/// Returns kInfeasible when no alpha_br in [alpha_floor, 1] meets the SNR
/// floor under the linearised SNR ceiling.
inline SubproblemSolution solve_bandwidth(const SystemParams& p,
                                          const SigmoidFit& fit,
                                          const sca::LocalPoint& lp,
                                          double d_br, double d_ru,
                                          const Auxiliaries& aux,
                                          double lambda,
                                          double alpha_floor = kAlphaFloor,
                                          const barrier::Options& opt = {}) {
  detail::BandwidthProgram prog;
  prog.q_ru = p.P_r * p.rho0() / (p.path_loss(d_ru) * p.W * p.n0());
  prog.k4 = p.mu / (4.0 * fit.K);
  prog.sum_t = lp.alpha_br_t + lp.S_t;
  prog.a1 = fit.a1;
  prog.a2 = fit.a2;
  prog.c1 = fit.c1;
  prog.c2 = fit.c2;
  prog.logi = sca::lemma2_coefficients(fit, lp);
  prog.snr_full_band_db =
      linear_to_db(p.P_b * p.rho0() / (p.path_loss(d_br) * p.W * p.n0()));
  prog.logb = sca::bandwidth_gamma_coefficients(lp);
  prog.alpha_t = lp.alpha_br_t;
  prog.gamma_min = min_snr_threshold_db(fit);
  prog.alpha_floor = alpha_floor;
  prog.eta_cap = detail::rate_ceiling(p, fit);
  prog.pen = 1.0 / (2.0 * lambda * p.W);
  prog.ahat_br = aux.alpha_br;
  prog.ahat_ru = aux.alpha_ru;

  SubproblemSolution sol;
  sol.point.d_br = d_br;
  sol.point.d_ru = d_ru;
  sol.point.alpha_br = lp.alpha_br_t;
  sol.point.gamma_br_db = lp.gamma_br_t;
  sol.S = lp.S_t;

  // Largest alpha_br whose linearised SNR ceiling still meets the floor.
  const double hi = std::min(
      1.0, lp.alpha_br_t +
               (prog.snr_full_band_db - prog.logb.E9 - prog.gamma_min) /
                   prog.logb.E10);
  if (!(hi > alpha_floor)) return sol;

  const double span = hi - alpha_floor;
  const double a_br =
      std::clamp(lp.alpha_br_t, alpha_floor + 1e-3 * span, hi - 1e-3 * span);
  const double a_ru = std::clamp(aux.alpha_ru > 0 ? aux.alpha_ru : 0.5,
                                 alpha_floor + 1e-4, 1.0 - 1e-4);
  const double ceiling = prog.gamma_ceiling(a_br);
  const double gamma = ceiling - 0.5 * (ceiling - prog.gamma_min);
  const double S = prog.similarity_ceiling(gamma) - 1e-3;
  const double eta = detail::interior_rate(std::min(
      {prog.ru_rate(a_ru), prog.product_bound(a_br, S), prog.eta_cap}));

  detail::BandwidthProgram::V x0;
  x0 << a_br, a_ru, gamma, S, eta;
  const auto res = barrier::maximize(prog, x0, opt);
  sol.status = detail::to_status(res.status);
  sol.newton_iterations = res.newton_iterations;
  if (sol.status == SubproblemStatus::kInfeasible) return sol;

  sol.point.alpha_br = res.x[0];
  sol.point.alpha_ru = res.x[1];
  sol.point.gamma_br_db = res.x[2];
  sol.S = res.x[3];
  sol.point.eta = res.x[4] * p.W;
  sol.objective = res.objective * p.W;
  return sol;
}

/// Euclidean projection of the primal copies onto d_br + d_ru = D and
/// alpha_br + alpha_ru = 1: each pair shares its shortfall equally.
inline Auxiliaries solve_auxiliary(double d_br, double d_ru, double alpha_br,
                                   double alpha_ru, double D) {
  const double d_gap = (D - d_br - d_ru) / 2.0;
  const double a_gap = (1.0 - alpha_br - alpha_ru) / 2.0;
  return {d_br + d_gap, d_ru + d_gap, alpha_br + a_gap, alpha_ru + a_gap};
}

}  // namespace semrelay
