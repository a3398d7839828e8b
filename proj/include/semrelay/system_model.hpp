#pragma once

// Physical-layer model of a two-hop link where the first hop (BS -> relay)
// carries semantic symbols and the second hop (relay -> user) carries bits.
// Every function here is a pure evaluation; dB/dBm values only appear in the
// parameter structs and in SNR results.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace semrelay {

/// Accuracy used for equality constraints (bandwidth split, placement split).
inline constexpr double kTolEq = 1e-8;
/// Smallest bandwidth fraction a solver will hand to either hop.
inline constexpr double kAlphaFloor = 1e-6;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
/// dBm/Hz -> W/Hz.
inline double dbm_to_watts(double dbm) { return db_to_linear(dbm - 30.0); }

struct SystemParams {
  double D = 100.0;            // BS-user horizontal distance [m]
  double H = 10.0;             // relay altitude [m]
  double rho0_db = -60.0;      // channel gain at 1 m [dB]
  double beta = 3.0;           // path-loss exponent
  double P_b = 0.1;            // BS transmit power [W]
  double P_r = 0.1;            // relay transmit power [W]
  double N0_dbm_hz = -169.0;   // noise PSD [dBm/Hz]
  double W = 1e6;              // total bandwidth [Hz]
  double mu = 40.0;            // bits per word

  double rho0() const { return db_to_linear(rho0_db); }
  double n0() const { return dbm_to_watts(N0_dbm_hz); }

  /// (d^2 + H^2)^(beta/2): inverse path gain at horizontal offset d.
  double path_loss(double d) const {
    return std::pow(d * d + H * H, beta / 2.0);
  }

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const {
    auto require = [](bool ok, const char* key, const char* what) {
      if (!ok) throw std::invalid_argument(std::string(key) + ": " + what);
    };
    require(std::isfinite(D) && D > 0, "D", "must be > 0");
    require(std::isfinite(H) && H >= 0, "H", "must be >= 0");
    require(std::isfinite(rho0_db), "rho0_db", "must be finite");
    require(std::isfinite(beta) && beta >= 2, "beta", "must be >= 2");
    require(std::isfinite(P_b) && P_b > 0, "P_b", "must be > 0");
    require(std::isfinite(P_r) && P_r > 0, "P_r", "must be > 0");
    require(std::isfinite(N0_dbm_hz), "N0_dbm_hz", "must be finite");
    require(std::isfinite(W) && W > 0, "W", "must be > 0");
    require(std::isfinite(mu) && mu > 0, "mu", "must be > 0");
  }
};

/// Logistic fit of semantic similarity versus received SNR (in dB), for a
/// transceiver using K semantic symbols per word.
struct SigmoidFit {
  double a1 = 0.3980;
  double a2 = 0.5385;
  double c1 = 0.2815;
  double c2 = -1.3135;
  double K = 4.0;
  double eps_bar = 0.9;  // minimum acceptable similarity

  void validate() const {
    auto require = [](bool ok, const char* key, const char* what) {
      if (!ok) throw std::invalid_argument(std::string(key) + ": " + what);
    };
    require(std::isfinite(a1) && a1 > 0, "a1", "must be > 0");
    require(std::isfinite(a2) && a2 > 0, "a2", "must be > 0");
    require(a1 + a2 <= 1.0, "a2", "a1 + a2 must be <= 1");
    require(std::isfinite(c1) && c1 > 0, "c1", "must be > 0");
    require(std::isfinite(c2), "c2", "must be finite");
    require(std::isfinite(K) && K > 0, "K", "must be > 0");
    require(std::isfinite(eps_bar) && eps_bar > a1 && eps_bar < a1 + a2,
            "eps_bar", "must lie strictly between a1 and a1 + a2");
  }
};

/// A candidate relay position and bandwidth split.
struct DesignPoint {
  double d_br = 0.0;
  double d_ru = 0.0;
  double alpha_br = 0.0;
  double alpha_ru = 0.0;
  double gamma_br_db = 0.0;
  double eta = 0.0;  // effective bit rate [bit/s]

  bool operator==(const DesignPoint&) const = default;
};

/// Received SNR at the relay, in dB.
inline double snr_br_db(const SystemParams& p, double d_br, double alpha_br) {
  if (!(alpha_br > 0.0)) {
    throw std::domain_error("snr_br_db: alpha_br must be > 0");
  }
  const double snr =
      p.P_b * p.rho0() / (p.path_loss(d_br) * alpha_br * p.W * p.n0());
  return linear_to_db(snr);
}

/// Sigmoid similarity, strictly increasing in gamma_db.
inline double semantic_similarity(const SigmoidFit& fit, double gamma_db) {
  return fit.a1 + fit.a2 / (1.0 + std::exp(-(fit.c1 * gamma_db + fit.c2)));
}

/// Semantic rate in suts/s; suts_per_word is the sentence-level I/L ratio.
inline double semantic_rate(const SystemParams& p, const SigmoidFit& fit,
                            double alpha_br, double eps,
                            double suts_per_word = 1.0) {
  return alpha_br * p.W * suts_per_word * eps / fit.K;
}

/// Semantic rate expressed as delivered bits/s.
inline double semantic_bit_rate(const SystemParams& p, const SigmoidFit& fit,
                                double alpha_br, double eps) {
  return p.mu * alpha_br * p.W * eps / fit.K;
}

/// Shannon rate of an FDMA hop with the given power and bandwidth fraction.
/// Zero bandwidth gives zero rate (continuous limit).
inline double hop_bit_rate(const SystemParams& p, double power, double d,
                           double alpha) {
  if (alpha <= 0.0) return 0.0;
  const double bw = alpha * p.W;
  const double snr = power * p.rho0() / (p.path_loss(d) * bw * p.n0());
  return bw * std::log1p(snr) / std::numbers::ln2;
}

/// Relay -> user bit rate.
inline double bit_rate_ru(const SystemParams& p, double d_ru, double alpha_ru) {
  return hop_bit_rate(p, p.P_r, d_ru, alpha_ru);
}

/// Both branch rates plus the similarity check behind an effective rate.
struct RateEvaluation {
  double eta = 0.0;  // min of the branches, 0 when infeasible
  double semantic_branch = 0.0;
  double bit_branch = 0.0;
  double similarity = 0.0;
  bool feasible = false;  // similarity >= eps_bar
};

/// Effective end-to-end rate min(R_br, R_ru). A point whose similarity falls
/// below eps_bar is flagged infeasible rather than reported as a zero rate.
inline RateEvaluation effective_rate(const SystemParams& p,
                                     const SigmoidFit& fit,
                                     const DesignPoint& pt) {
  RateEvaluation r;
  // alpha_br -> 0 drives the SNR to +inf, so similarity saturates.
  r.similarity = pt.alpha_br > 0.0
                     ? semantic_similarity(fit, snr_br_db(p, pt.d_br, pt.alpha_br))
                     : fit.a1 + fit.a2;
  r.semantic_branch = semantic_bit_rate(p, fit, pt.alpha_br, r.similarity);
  r.bit_branch = bit_rate_ru(p, pt.d_ru, pt.alpha_ru);
  r.feasible = r.similarity >= fit.eps_bar;
  r.eta = r.feasible ? std::min(r.semantic_branch, r.bit_branch) : 0.0;
  return r;
}

/// Smallest SNR (dB) meeting the similarity floor: the sigmoid inverted at
/// eps_bar.
inline double min_snr_threshold_db(const SigmoidFit& fit) {
  const double hi = fit.a1 + fit.a2;
  if (!(fit.eps_bar > fit.a1 && fit.eps_bar < hi)) {
    throw std::domain_error(
        "min_snr_threshold_db: eps_bar must lie in (a1, a1 + a2)");
  }
  return std::log((fit.eps_bar - fit.a1) / (hi - fit.eps_bar)) / fit.c1 -
         fit.c2 / fit.c1;
}

/// Largest first-hop bandwidth [Hz] that still meets the similarity floor
/// with the relay at horizontal offset d_br.
inline double max_semantic_bandwidth(const SystemParams& p,
                                     const SigmoidFit& fit, double d_br) {
  return p.P_b * p.rho0() /
         (p.path_loss(d_br) * p.n0() * db_to_linear(min_snr_threshold_db(fit)));
}

/// Recomputes gamma and eta of `pt` from its placement and bandwidth split.
inline DesignPoint evaluate(const SystemParams& p, const SigmoidFit& fit,
                            DesignPoint pt) {
  pt.gamma_br_db = pt.alpha_br > 0.0 ? snr_br_db(p, pt.d_br, pt.alpha_br)
                                     : std::numeric_limits<double>::infinity();
  pt.eta = effective_rate(p, fit, pt).eta;
  return pt;
}

}  // namespace semrelay
