#pragma once

// Two-layer penalty method for joint relay placement and bandwidth split.
//
// The sum constraints are moved onto auxiliary copies (d_hat, alpha_hat) and
// the copy-equalities are penalised with weight 1/(2 lambda). For a fixed
// lambda, the inner layer cycles placement -> bandwidth -> auxiliary blocks
// until the penalised objective stalls; the outer layer shrinks lambda by a
// constant factor until the largest copy mismatch (zeta) reaches eps1.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semrelay/sca_bounds.hpp"
#include "semrelay/subproblems.hpp"
#include "semrelay/system_model.hpp"

namespace semrelay {

struct PenaltyConfig {
  double lambda0 = 1000.0;
  double c = 0.9;       // lambda <- c * lambda after each outer iteration
  double nu = 1e-4;     // weight of the distance mismatch terms
  double eps1 = 1e-8;   // target zeta
  double inner_tol = 1e-6;       // relative change of the penalised objective
  double inner_step_tol = 1e-6;  // max |d change|/D, |alpha change| per cycle
  int max_inner = 100;
  int max_outer = 500;
  double alpha_floor = kAlphaFloor;
  double lambda_floor = 1e-30;

  void validate() const {
    auto require = [](bool ok, const char* key, const char* what) {
      if (!ok) throw std::invalid_argument(std::string(key) + ": " + what);
    };
    require(std::isfinite(lambda0) && lambda0 > 0, "lambda0", "must be > 0");
    require(c > 0 && c < 1, "c", "must lie in (0, 1)");
    require(std::isfinite(nu) && nu > 0, "nu", "must be > 0");
    require(std::isfinite(eps1) && eps1 > 0, "eps1", "must be > 0");
    require(std::isfinite(inner_tol) && inner_tol > 0, "inner_tol", "must be > 0");
    require(std::isfinite(inner_step_tol) && inner_step_tol > 0,
            "inner_step_tol", "must be > 0");
    require(max_inner >= 1, "max_inner", "must be >= 1");
    require(max_outer >= 1, "max_outer", "must be >= 1");
    require(alpha_floor > 0 && alpha_floor < 0.5, "alpha_floor",
            "must lie in (0, 0.5)");
    require(lambda_floor > 0 && lambda_floor <= lambda0, "lambda_floor",
            "must lie in (0, lambda0]");
  }
};

enum class SolveStatus { kConverged, kIterationCap, kInfeasible };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kIterationCap:
      return "iteration-cap";
    case SolveStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

struct TraceEntry {
  int outer = 0;
  double lambda = 0.0;
  double objective = 0.0;  // penalised objective after a full cycle [bit/s]
  DesignPoint iterate;     // primal point after the cycle (unprojected)

  bool operator==(const TraceEntry&) const = default;
};

/// Iterate of the penalty method: primal point, similarity slack, copies.
struct PenaltyState {
  DesignPoint x;
  double S = 0.0;
  Auxiliaries aux;
  double lambda = 0.0;
  double nu = 0.0;
  double zeta = 0.0;
};

struct SolveReport {
  DesignPoint best;
  double zeta = 0.0;
  int inner_iters = 0;
  int outer_iters = 0;
  std::vector<TraceEntry> objective_trace;
  std::vector<double> zeta_trace;  // zeta at the end of each outer iteration
  SolveStatus status = SolveStatus::kInfeasible;

  bool operator==(const SolveReport&) const = default;
};

/// Largest copy mismatch; distance terms are divided by D.
inline double violation(double d_br, double d_ru, double alpha_br,
                        double alpha_ru, const Auxiliaries& aux, double D) {
  return std::max({std::abs(alpha_br - aux.alpha_br),
                   std::abs(alpha_ru - aux.alpha_ru),
                   std::abs(d_br - aux.d_br) / D, std::abs(d_ru - aux.d_ru) / D});
}

/// True when some point of a coarse n x n grid over (d_br, alpha_br) meets the
/// similarity floor.
inline bool has_feasible_point(const SystemParams& p, const SigmoidFit& fit,
                               int n = 101) {
  const double gamma_min = min_snr_threshold_db(fit);
  for (int i = 0; i < n; ++i) {
    const double d = p.D * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double a = kAlphaFloor + (1.0 - 2.0 * kAlphaFloor) * j / (n - 1);
      if (snr_br_db(p, d, a) >= gamma_min) return true;
    }
  }
  return false;
}

namespace detail {

/// min of the two branch rates with similarity taken from gamma, regardless
/// of the similarity floor.
inline double branch_rate(const SystemParams& p, const SigmoidFit& fit,
                          const DesignPoint& x) {
  return std::min(
      semantic_bit_rate(p, fit, x.alpha_br, semantic_similarity(fit, x.gamma_br_db)),
      bit_rate_ru(p, x.d_ru, x.alpha_ru));
}

inline double penalised_objective(const SystemParams& p, const SigmoidFit& fit,
                                  const PenaltyState& s) {
  const auto sq = [](double v) { return v * v; };
  return branch_rate(p, fit, s.x) -
         (sq(s.x.alpha_br - s.aux.alpha_br) + sq(s.x.alpha_ru - s.aux.alpha_ru) +
          s.nu * sq(s.x.d_br - s.aux.d_br) + s.nu * sq(s.x.d_ru - s.aux.d_ru)) /
             (2.0 * s.lambda);
}

/// Restores the relaxed equalities: gamma from the exact SNR, S from the
/// sigmoid, eta from the exact branch rates.
inline void tighten(const SystemParams& p, const SigmoidFit& fit,
                    PenaltyState& s) {
  s.x.gamma_br_db = snr_br_db(p, s.x.d_br, s.x.alpha_br);
  s.S = semantic_similarity(fit, s.x.gamma_br_db);
  s.x.eta = branch_rate(p, fit, s.x);
}

inline bool meets_floor(const SigmoidFit& fit, const PenaltyState& s) {
  return s.x.gamma_br_db >= min_snr_threshold_db(fit);
}

/// Accepts a block update unless it lowers the penalised objective of a
/// point that already met the similarity floor.
inline void accept_if_ascent(const SystemParams& p, const SigmoidFit& fit,
                             PenaltyState& s, const PenaltyState& trial) {
  if (!meets_floor(fit, trial)) return;
  if (!meets_floor(fit, s)) {
    s = trial;
    return;
  }
  const double before = penalised_objective(p, fit, s);
  const double after = penalised_objective(p, fit, trial);
  if (after >= before - 1e-9 * std::max(1.0, std::abs(before))) s = trial;
}

/// Final projection onto the equality constraints. If the first-hop SNR then
/// sits a rounding error under the floor, alpha_br is trimmed to the largest
/// admissible value and the remainder handed to the second hop.
inline DesignPoint finalise(const SystemParams& p, const SigmoidFit& fit,
                            const PenaltyState& s) {
  const auto proj =
      solve_auxiliary(s.x.d_br, s.x.d_ru, s.x.alpha_br, s.x.alpha_ru, p.D);
  DesignPoint pt;
  pt.d_br = std::clamp(proj.d_br, 0.0, p.D);
  pt.d_ru = p.D - pt.d_br;
  pt.alpha_br = proj.alpha_br;
  const double cap = max_semantic_bandwidth(p, fit, pt.d_br) / p.W;
  if (pt.alpha_br > cap) pt.alpha_br = cap * (1.0 - 1e-12);
  pt.alpha_ru = 1.0 - pt.alpha_br;
  return evaluate(p, fit, pt);
}

}  // namespace detail

inline DesignPoint default_initial_point(const SystemParams& p) {
  DesignPoint pt;
  pt.d_br = pt.d_ru = p.D / 2.0;
  pt.alpha_br = pt.alpha_ru = 0.5;
  pt.gamma_br_db = snr_br_db(p, pt.d_br, pt.alpha_br);
  return pt;
}

/// Runs the penalty method. `init` defaults to the midpoint placement with an
/// even bandwidth split; its gamma and eta are recomputed.
inline SolveReport run(const SystemParams& p, const SigmoidFit& fit,
                       const PenaltyConfig& cfg,
                       std::optional<DesignPoint> init = std::nullopt) {
  p.validate();
  fit.validate();
  cfg.validate();

  SolveReport report;
  if (!has_feasible_point(p, fit)) {
    report.status = SolveStatus::kInfeasible;
    return report;
  }

  PenaltyState s;
  s.x = init.value_or(default_initial_point(p));
  s.x.alpha_br = std::max(s.x.alpha_br, cfg.alpha_floor);
  s.x.alpha_ru = std::max(s.x.alpha_ru, cfg.alpha_floor);
  s.aux = {s.x.d_br, s.x.d_ru, s.x.alpha_br, s.x.alpha_ru};
  s.lambda = cfg.lambda0;
  s.nu = cfg.nu;
  detail::tighten(p, fit, s);

  report.status = SolveStatus::kIterationCap;
  for (int outer = 1; outer <= cfg.max_outer; ++outer) {
    report.outer_iters = outer;
    double prev = detail::penalised_objective(p, fit, s);
    for (int inner = 1; inner <= cfg.max_inner; ++inner) {
      ++report.inner_iters;
      const DesignPoint before = s.x;

      auto lp = sca::local_point_from(s.x, s.S);
      const auto placed = solve_placement(p, fit, lp, s.x.alpha_br,
                                          s.x.alpha_ru, s.aux, s.lambda, s.nu);
      if (placed.status != SubproblemStatus::kInfeasible) {
        PenaltyState trial = s;
        trial.x.d_br = placed.point.d_br;
        trial.x.d_ru = placed.point.d_ru;
        detail::tighten(p, fit, trial);
        detail::accept_if_ascent(p, fit, s, trial);
      }

      lp = sca::local_point_from(s.x, s.S);
      const auto banded = solve_bandwidth(p, fit, lp, s.x.d_br, s.x.d_ru,
                                          s.aux, s.lambda, cfg.alpha_floor);
      if (banded.status != SubproblemStatus::kInfeasible) {
        PenaltyState trial = s;
        trial.x.alpha_br = banded.point.alpha_br;
        trial.x.alpha_ru = banded.point.alpha_ru;
        detail::tighten(p, fit, trial);
        detail::accept_if_ascent(p, fit, s, trial);
      }

      s.aux = solve_auxiliary(s.x.d_br, s.x.d_ru, s.x.alpha_br, s.x.alpha_ru, p.D);

      const double obj = detail::penalised_objective(p, fit, s);
      report.objective_trace.push_back({outer, s.lambda, obj, s.x});
      const double step = std::max(
          {std::abs(s.x.alpha_br - before.alpha_br),
           std::abs(s.x.alpha_ru - before.alpha_ru),
           std::abs(s.x.d_br - before.d_br) / p.D,
           std::abs(s.x.d_ru - before.d_ru) / p.D});
      const bool stalled =
          std::abs(obj - prev) <= cfg.inner_tol * std::max(std::abs(prev), 1e-300) &&
          step <= cfg.inner_step_tol;
      prev = obj;
      if (stalled) break;
    }

    s.zeta = violation(s.x.d_br, s.x.d_ru, s.x.alpha_br, s.x.alpha_ru, s.aux, p.D);
    report.zeta_trace.push_back(s.zeta);
    if (s.zeta <= cfg.eps1 && detail::meets_floor(fit, s)) {
      report.status = SolveStatus::kConverged;
      break;
    }
    s.lambda = std::max(cfg.c * s.lambda, cfg.lambda_floor);
  }

  report.zeta = s.zeta;
  if (!detail::meets_floor(fit, s)) {
    report.status = SolveStatus::kInfeasible;
    report.best = s.x;
    return report;
  }
  report.best = detail::finalise(p, fit, s);
  return report;
}

}  // namespace semrelay
