#pragma once

// Exhaustive grid searches over the reduced design space (d_br, alpha_br),
// with d_ru = D - d_br and alpha_ru = 1 - alpha_br, plus the restricted and
// conventional-relay comparison schemes. Grid order is d_br outer, alpha_br
// inner, both ascending; a candidate replaces the incumbent only when strictly
// better, so ties resolve to the smaller d_br, then the smaller alpha_br.

#include <cmath>
#include <numbers>
#include <optional>

#include "semrelay/system_model.hpp"

namespace semrelay::oracle {

struct GridSpec {
  int n_d = 1001;
  int n_alpha = 1001;

  void validate() const {
    if (n_d < 2 || n_alpha < 2) {
      throw std::invalid_argument("GridSpec: n_d and n_alpha must be >= 2");
    }
  }
};

/// Outcome of one scheme; `point` is meaningful only when `feasible`.
struct SchemeResult {
  DesignPoint point;
  bool feasible = false;
  /// Fixed-placement scheme only: first-hop bandwidth ceiling [Hz] and
  /// whether the optimum sits on it (within one grid cell).
  std::optional<double> semantic_cap_hz;
  bool cap_binding = false;
};

inline double grid_distance(const SystemParams& p, int i, int n) {
  return p.D * static_cast<double>(i) / (n - 1);
}
inline double grid_alpha(int j, int n) {
  return kAlphaFloor + (1.0 - 2.0 * kAlphaFloor) * static_cast<double>(j) / (n - 1);
}

inline DesignPoint reduced_point(const SystemParams& p, double d_br,
                                 double alpha_br) {
  DesignPoint pt;
  pt.d_br = d_br;
  pt.d_ru = p.D - d_br;
  pt.alpha_br = alpha_br;
  pt.alpha_ru = 1.0 - alpha_br;
  return pt;
}

namespace detail {

/// Scans points produced by `make(i, j)`, keeping the first strict maximum of
/// `score` among points that `score` reports (nullopt = skip).
template <typename Make, typename Score>
SchemeResult scan(int n_outer, int n_inner, Make make, Score score) {
  SchemeResult best;
  double best_eta = -1.0;
  for (int i = 0; i < n_outer; ++i) {
    for (int j = 0; j < n_inner; ++j) {
      DesignPoint pt = make(i, j);
      const std::optional<double> eta = score(pt);
      if (eta && *eta > best_eta) {
        best_eta = *eta;
        pt.eta = *eta;
        best.point = pt;
        best.feasible = true;
      }
    }
  }
  return best;
}

inline std::optional<double> semrelay_score(const SystemParams& p,
                                            const SigmoidFit& fit,
                                            DesignPoint& pt) {
  const auto r = effective_rate(p, fit, pt);
  if (!r.feasible) return std::nullopt;
  pt.gamma_br_db = snr_br_db(p, pt.d_br, pt.alpha_br);
  return r.eta;
}

}  // namespace detail

/// Jointly optimal placement and bandwidth split on the grid.
inline SchemeResult oracle_search(const SystemParams& p, const SigmoidFit& fit,
                                  const GridSpec& g = {}) {
  g.validate();
  return detail::scan(
      g.n_d, g.n_alpha,
      [&](int i, int j) {
        return reduced_point(p, grid_distance(p, i, g.n_d), grid_alpha(j, g.n_alpha));
      },
      [&](DesignPoint& pt) { return detail::semrelay_score(p, fit, pt); });
}

/// Conventional decode-and-forward relay: Shannon rate on both hops.
inline double df_relay_rate(const SystemParams& p, double d_br, double alpha_br) {
  return std::min(hop_bit_rate(p, p.P_b, d_br, alpha_br),
                  bit_rate_ru(p, p.D - d_br, 1.0 - alpha_br));
}

inline SchemeResult df_search(const SystemParams& p, const GridSpec& g = {}) {
  g.validate();
  return detail::scan(
      g.n_d, g.n_alpha,
      [&](int i, int j) {
        return reduced_point(p, grid_distance(p, i, g.n_d), grid_alpha(j, g.n_alpha));
      },
      [&](DesignPoint& pt) -> std::optional<double> {
        pt.gamma_br_db = snr_br_db(p, pt.d_br, pt.alpha_br);
        return df_relay_rate(p, pt.d_br, pt.alpha_br);
      });
}

/// Placement optimised with an even bandwidth split.
inline SchemeResult equal_bandwidth_search(const SystemParams& p,
                                           const SigmoidFit& fit,
                                           int n_d = 10001) {
  GridSpec{n_d, 2}.validate();
  return detail::scan(
      n_d, 1,
      [&](int i, int) { return reduced_point(p, grid_distance(p, i, n_d), 0.5); },
      [&](DesignPoint& pt) { return detail::semrelay_score(p, fit, pt); });
}

/// Bandwidth split optimised with the relay at the midpoint.
inline SchemeResult fixed_placement_search(const SystemParams& p,
                                           const SigmoidFit& fit,
                                           int n_alpha = 10001) {
  GridSpec{2, n_alpha}.validate();
  auto res = detail::scan(
      1, n_alpha,
      [&](int, int j) { return reduced_point(p, p.D / 2.0, grid_alpha(j, n_alpha)); },
      [&](DesignPoint& pt) { return detail::semrelay_score(p, fit, pt); });
  const double cap = max_semantic_bandwidth(p, fit, p.D / 2.0);
  res.semantic_cap_hz = cap;
  if (res.feasible) {
    const double cell = (1.0 - 2.0 * kAlphaFloor) / (n_alpha - 1);
    res.cap_binding = (res.point.alpha_br + cell) * p.W > cap;
  }
  return res;
}

}  // namespace semrelay::oracle
