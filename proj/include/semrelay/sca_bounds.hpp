#pragma once

// First-order (tangent) surrogates used by the successive convex
// approximation steps. Each surrogate is exposed twice: as a coefficient set
// computed at a local point, and as an evaluation at an arbitrary point. The
// subproblem solvers consume the coefficients directly to assemble gradients
// and Hessians.
//
// Orientation summary:
//   relay->user rate (in u = (d^2+H^2)^(beta/2))   tangent lower bound
//   logistic term 1/(1+e^-chi) (in e^-chi)         tangent lower bound
//   log10(d^2+H^2) (in d^2)                        tangent upper bound
//   (alpha+S)^2                                    tangent lower bound
//   10 log10(alpha)                                tangent upper bound, so the
//                                                  SNR ceiling it yields sits
//                                                  below the exact one

#include <cmath>
#include <numbers>

#include "semrelay/system_model.hpp"

namespace semrelay::sca {

/// Expansion point of all surrogates: the incumbent iterate.
struct LocalPoint {
  double d_br_t = 0.0;
  double d_ru_t = 0.0;
  double alpha_br_t = 0.5;
  double gamma_br_t = 0.0;  // dB
  double S_t = 0.0;         // similarity value paired with alpha_br_t
};

inline LocalPoint local_point_from(const DesignPoint& pt, double similarity) {
  return {pt.d_br, pt.d_ru, pt.alpha_br, pt.gamma_br_db, similarity};
}

// ---------------------------------------------------------------------------
// Relay -> user rate, tangent in u = (d_ru^2 + H^2)^(beta/2).

struct RuRateCoeffs {
  double E1 = 0.0;   // log2(1 + q/u_t)
  double E2 = 0.0;   // -d/du log2(1 + q/u) at u_t
  double u_t = 0.0;  // (d_ru_t^2 + H^2)^(beta/2)
};

inline RuRateCoeffs lemma1_coefficients(const SystemParams& p,
                                        const LocalPoint& lp, double alpha_ru) {
  const double q = p.P_r * p.rho0() / (alpha_ru * p.W * p.n0());
  const double u_t = p.path_loss(lp.d_ru_t);
  const double snr = q / u_t;
  return {std::log1p(snr) / std::numbers::ln2,
          (q * std::numbers::log2e / (u_t * u_t)) / (1.0 + snr), u_t};
}

/// Lower bound on the relay->user bit rate, tight at d_ru = lp.d_ru_t. May go
/// negative far from the expansion point.
inline double lemma1_bound(const SystemParams& p, const LocalPoint& lp,
                           double alpha_ru, double d_ru) {
  const auto c = lemma1_coefficients(p, lp, alpha_ru);
  return alpha_ru * p.W * (c.E1 - c.E2 * (p.path_loss(d_ru) - c.u_t));
}

// ---------------------------------------------------------------------------
// Logistic term psi = 1/(1 + e^-chi), chi = c1*gamma + c2, tangent in e^-chi.

struct LogisticCoeffs {
  double E_lin = 0.0;   // psi at the local point (E3 / E7)
  double E_quad = 0.0;  // psi^2 at the local point (E4 / E8)
  double exp_t = 0.0;   // e^-chi_t
};

inline LogisticCoeffs lemma2_coefficients(const SigmoidFit& fit,
                                          const LocalPoint& lp) {
  const double exp_t = std::exp(-(fit.c1 * lp.gamma_br_t + fit.c2));
  const double psi = 1.0 / (1.0 + exp_t);
  return {psi, psi * psi, exp_t};
}

inline double lemma2_bound(const SigmoidFit& fit, const LocalPoint& lp,
                           double gamma_db) {
  const auto c = lemma2_coefficients(fit, lp);
  const double e = std::exp(-(fit.c1 * gamma_db + fit.c2));
  return c.E_lin - c.E_quad * (e - c.exp_t);
}

// ---------------------------------------------------------------------------
// phi = log10(d_br^2 + H^2), tangent in d_br^2.

struct LogDistanceCoeffs {
  double E5 = 0.0;
  double E6 = 0.0;
};

inline LogDistanceCoeffs lemma3_coefficients(const LocalPoint& lp, double H) {
  const double r2 = lp.d_br_t * lp.d_br_t + H * H;
  return {std::log10(r2), std::numbers::log10e / r2};
}

inline double lemma3_bound(const LocalPoint& lp, double H, double d_br) {
  const auto c = lemma3_coefficients(lp, H);
  return c.E5 + c.E6 * (d_br * d_br - lp.d_br_t * lp.d_br_t);
}

// ---------------------------------------------------------------------------
// (alpha_br + S)^2, tangent in the sum.

inline double lemma4_bound(const LocalPoint& lp, double alpha_br, double S) {
  const double s_t = lp.alpha_br_t + lp.S_t;
  return -s_t * s_t + 2.0 * s_t * (alpha_br + S);
}

// ---------------------------------------------------------------------------
// Bandwidth-block bounds.

struct LogBandwidthCoeffs {
  double E9 = 0.0;   // 10 log10(alpha_t)
  double E10 = 0.0;  // 10 log10(e) / alpha_t
};

inline LogBandwidthCoeffs bandwidth_gamma_coefficients(const LocalPoint& lp) {
  return {10.0 * std::log10(lp.alpha_br_t),
          10.0 * std::numbers::log10e / lp.alpha_br_t};
}

/// SNR ceiling of the first hop with 10 log10(alpha_br) linearised at
/// lp.alpha_br_t. Equal to snr_br_db at the expansion point and never above
/// it elsewhere.
inline double bandwidth_gamma_ub(const SystemParams& p, const LocalPoint& lp,
                                 double d_br, double alpha_br) {
  const auto c = bandwidth_gamma_coefficients(lp);
  const double full_band =
      linear_to_db(p.P_b * p.rho0() / (p.path_loss(d_br) * p.W * p.n0()));
  return full_band - c.E9 - c.E10 * (alpha_br - lp.alpha_br_t);
}

/// Ceiling on the similarity variable S: lemma2_bound mapped through the
/// sigmoid's affine part. Never above semantic_similarity.
inline double bandwidth_similarity_ub(const SigmoidFit& fit,
                                      const LocalPoint& lp, double gamma_db) {
  return fit.a1 + fit.a2 * lemma2_bound(fit, lp, gamma_db);
}

}  // namespace semrelay::sca
