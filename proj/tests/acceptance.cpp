// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "semrelay/semrelay.hpp"
#include "support.hpp"
#include "surrogate_suite.hpp"

using namespace semrelay;
namespace ts = testing_support;

namespace {

int g_failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d %-24s %s\n", pass ? "PASS" : "FAIL", id, title,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool feasible_row(const SweepRow& r) { return r.status_oracle == "ok"; }

// --- criteria 1-5: the default bandwidth sweep ----------------------------

void sweep_criteria(const std::vector<SweepRow>& rows, double seconds) {
  std::printf("  %-12s %-13s %-13s %-13s %-13s %-13s %-9s %-9s %-9s %-9s\n", "W",
              "penalty", "oracle", "equal_bw", "fixed_place", "df", "a_br_pen",
              "a_br_orc", "d_br_orc", "ratio");
  for (const auto& r : rows) {
    std::printf("  %-12.5e %-13.6e %-13.6e %-13.6e %-13.6e %-13.6e %-9.5f %-9.5f %-9.3f %-9.5f\n",
                r.W, r.eta_penalty, r.eta_oracle, r.eta_equal_bw, r.eta_fixed_place,
                r.eta_df, r.alpha_br_opt, r.alpha_br_oracle, r.d_br_oracle,
                r.eta_penalty / r.eta_oracle);
  }

  // 1. near-optimality
  {
    double worst = std::numeric_limits<double>::infinity();
    double at = 0;
    int checked = 0;
    bool ok = true;
    for (const auto& r : rows) {
      if (!feasible_row(r)) continue;
      ++checked;
      const double ratio = std::isnan(r.eta_penalty) ? 0.0 : r.eta_penalty / r.eta_oracle;
      if (ratio < worst) {
        worst = ratio;
        at = r.W;
      }
      ok = ok && ratio >= 0.98;
    }
    report(1, "near-optimality", ok && checked > 0,
           fmt("min eta_penalty/eta_oracle = %.5f at W=%.4g over %d feasible rows "
               "(need >= 0.98); sweep took %.1f s",
               worst, at, checked, seconds));
  }

  // 2. crossover with the decode-and-forward relay
  {
    // W* = first swept W where DF is at least as good; SemRelay must win
    // strictly below it and DF must hold at the largest W.
    std::size_t first_df = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!(rows[i].eta_penalty > rows[i].eta_df)) {
        first_df = i;
        break;
      }
    }
    bool below_ok = true;
    for (std::size_t i = 0; i < first_df; ++i) {
      below_ok = below_ok && rows[i].eta_penalty > rows[i].eta_df;
    }
    const auto& last = rows.back();
    const bool top_ok = last.eta_df >= last.eta_penalty * (1 - 1e-3);
    const bool exists = first_df > 0 && first_df < rows.size();
    double max_ratio = 0;
    for (const auto& r : rows) max_ratio = std::max(max_ratio, r.eta_df / r.eta_penalty);
    report(2, "DF crossover", exists && below_ok && top_ok,
           fmt("largest W=%.4g: eta_df/eta_penalty = %.4f (need >= 0.999); "
               "max ratio over sweep %.4f; %s",
               last.W, last.eta_df / last.eta_penalty, max_ratio,
               exists ? fmt("switch at W=%.4g", rows[first_df].W).c_str()
                      : "no switch inside the sweep"));
  }

  // 3. bandwidth asymmetry
  {
    int bad_pen = 0, bad_orc = 0, checked = 0;
    double max_pen = 0, max_orc = 0;
    for (const auto& r : rows) {
      if (!feasible_row(r)) continue;
      ++checked;
      bad_pen += r.alpha_br_opt < 0.5 ? 0 : 1;
      bad_orc += r.alpha_br_oracle < 0.5 ? 0 : 1;
      max_pen = std::max(max_pen, r.alpha_br_opt);
      max_orc = std::max(max_orc, r.alpha_br_oracle);
    }
    report(3, "bandwidth asymmetry", bad_pen == 0 && bad_orc == 0 && checked > 0,
           fmt("rows with alpha_br >= 0.5: penalty %d/%d (max %.4f), oracle %d/%d "
               "(max %.4f)",
               bad_pen, checked, max_pen, bad_orc, checked, max_orc));
  }

  // 4. placement trend: oracle d_ru non-increasing as W decreases
  {
    const double cell = 100.0 / 1000.0;
    int bad = 0;
    double worst = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      // moving from rows[i] down to rows[i-1]
      const double d_hi = 100.0 - rows[i].d_br_oracle;
      const double d_lo = 100.0 - rows[i - 1].d_br_oracle;
      const double rise = d_lo - d_hi;
      worst = std::max(worst, rise);
      bad += rise <= cell + 1e-9 ? 0 : 1;
    }
    report(4, "placement trend", bad == 0,
           fmt("largest d_ru increase per downward step %.3f m (slack %.1f m), "
               "%d violating steps; d_ru %.2f m at W=%.3g, %.2f m at W=%.3g",
               worst, cell, bad, 100.0 - rows.front().d_br_oracle, rows.front().W,
               100.0 - rows.back().d_br_oracle, rows.back().W));
  }
}

void saturation_criterion(const Config& cfg) {
  auto at = [&](double W) {
    SystemParams p = cfg.system;
    p.W = W;
    return std::pair{oracle::fixed_placement_search(p, cfg.fit, 10001),
                     oracle::oracle_search(p, cfg.fit, {1001, 1001})};
  };
  const auto [fx_lo, or_lo] = at(5e6);
  const auto [fx_hi, or_hi] = at(1e7);
  const double fx_gain = fx_hi.point.eta / fx_lo.point.eta - 1;
  const double or_gain = or_hi.point.eta / or_lo.point.eta - 1;
  report(5, "saturation", fx_gain < 0.05 && or_gain > fx_gain,
         fmt("fixed placement 5e6->1e7 Hz: %.4e -> %.4e (+%.2f%%, need < 5%%); "
             "oracle +%.2f%%; cap at midpoint %.4g Hz",
             fx_lo.point.eta, fx_hi.point.eta, 100 * fx_gain, 100 * or_gain,
             *fx_hi.semantic_cap_hz));
}

// --- criterion 6 ------------------------------------------------------------

void threshold_equivalence() {
  ts::Draw rng(2024);
  long mismatches = 0, ties = 0;
  const long n = 1000000;
  for (long i = 0; i < n; ++i) {
    SigmoidFit f;
    f.a1 = rng.uniform(0.05, 0.6);
    f.a2 = rng.uniform(0.05, 1.0 - f.a1);
    f.c1 = rng.log_uniform(0.01, 2.0);
    f.c2 = rng.uniform(-5, 5);
    f.eps_bar = rng.uniform(f.a1, f.a1 + f.a2);
    if (!(f.eps_bar > f.a1 && f.eps_bar < f.a1 + f.a2)) continue;
    const double th = min_snr_threshold_db(f);
    const double g = th + rng.uniform(-1, 1) * std::pow(10.0, rng.uniform(-12, 2));
    const bool by_similarity = semantic_similarity(f, g) >= f.eps_bar;
    const bool by_threshold = g >= th;
    if (by_similarity != by_threshold) {
      if (std::abs(g - th) <= 1e-9) {
        ++ties;
      } else {
        ++mismatches;
      }
    }
  }
  report(6, "constraint equivalence", mismatches == 0,
         fmt("%ld draws, %ld disagreements outside the 1e-9 dB tie band "
             "(%ld inside it)",
             n, mismatches, ties));
}

// --- criterion 7 ------------------------------------------------------------

void surrogate_suite() {
  bool ok = true;
  double tight = 0, grad = 0;
  long viol = 0, draws = 0;
  for (const auto& s : ts::run_surrogate_suite()) {
    ok = ok && s.worst_tightness <= 1e-10 && s.validity_violations == 0 &&
         s.worst_gradient <= 1e-6 && s.validity_draws == 100000;
    tight = std::max(tight, s.worst_tightness);
    grad = std::max(grad, s.worst_gradient);
    viol += s.validity_violations;
    draws += s.validity_draws;
  }
  report(7, "surrogate suite", ok,
         fmt("6 bounds: worst tightness %.2e (<= 1e-10), %ld/%ld validity "
             "violations, worst gradient %.2e (<= 1e-6)",
             tight, viol, draws, grad));
}

// --- criterion 8 ------------------------------------------------------------

void penalty_convergence(const Config& cfg) {
  SystemParams p = cfg.system;
  p.W = 1e6;
  const auto r = run(p, cfg.fit, cfg.penalty);
  double worst_drop = 0;
  for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
    const auto& a = r.objective_trace[k - 1];
    const auto& b = r.objective_trace[k];
    if (a.outer != b.outer) continue;
    worst_drop = std::max(worst_drop, (a.objective - b.objective) / std::abs(a.objective));
  }
  const double tol_sub = 1e-9;
  const auto& x = r.best;
  const auto e = effective_rate(p, cfg.fit, x);
  const bool feasible =
      x.d_br >= 0 && x.d_ru >= 0 && x.alpha_br >= 0 && x.alpha_ru >= 0 &&
      std::abs(x.d_br + x.d_ru - p.D) <= kTolEq * p.D &&
      std::abs(x.alpha_br + x.alpha_ru - 1) <= kTolEq && e.feasible &&
      x.gamma_br_db >= min_snr_threshold_db(cfg.fit) && e.eta == x.eta;
  report(8, "penalty convergence",
         r.status == SolveStatus::kConverged && r.zeta <= 1e-8 &&
             worst_drop <= 10 * tol_sub && feasible,
         fmt("status %s, zeta %.3e, %d outer / %d inner, worst relative inner "
             "drop %.2e (slack %.0e), final point %s",
             to_string(r.status), r.zeta, r.outer_iters, r.inner_iters, worst_drop,
             10 * tol_sub, feasible ? "feasible" : "INFEASIBLE"));
}

// --- criterion 9 ------------------------------------------------------------

// Minimiser of (x - a)^2 + (total - x - b)^2 by bisection on the sign of the
// derivative.
double bisect_pair(double a, double b, double total) {
  auto slope = [&](double x) { return 2 * (x - a) - 2 * (total - x - b); };
  double lo = std::min(a, total - b) - 1, hi = std::max(a, total - b) + 1;
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    const double mid = lo + (hi - lo) / 2;
    if (mid == lo || mid == hi) break;
    (slope(mid) > 0 ? hi : lo) = mid;
  }
  return lo + (hi - lo) / 2;
}

void projection_oracle() {
  ts::Draw rng(99);
  double worst = 0;
  const double D = 100;
  for (int i = 0; i < 10000; ++i) {
    const double d_br = rng.uniform(-20, 120), d_ru = rng.uniform(-20, 120);
    const double a_br = rng.uniform(-0.2, 1.2), a_ru = rng.uniform(-0.2, 1.2);
    const auto aux = solve_auxiliary(d_br, d_ru, a_br, a_ru, D);
    const double xa = bisect_pair(a_br, a_ru, 1.0);
    const double xd = bisect_pair(d_br, d_ru, D);
    worst = std::max({worst, std::abs(aux.alpha_br - xa), std::abs(aux.alpha_ru - (1 - xa)),
                      std::abs(aux.d_br - xd) / D, std::abs(aux.d_ru - (D - xd)) / D});
  }
  report(9, "projection", worst <= 1e-12,
         fmt("10000 random inputs, worst deviation from bisection oracle %.2e "
             "(distances / D)",
             worst));
}

// --- criterion 10 -----------------------------------------------------------

int run_cli(const std::string& args) {
  const int s = std::system((std::string(SEMRELAY_CLI_PATH) + " " + args + " > /dev/null").c_str());
  return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(const std::vector<SweepRow>& rows) {
  namespace fs = std::filesystem;
  const auto a = fs::temp_directory_path() / "semrelay_accept_a.csv";
  const auto b = fs::temp_directory_path() / "semrelay_accept_b.csv";
  const std::string args = "sweep --w-min 1e5 --w-max 1e7 --points 20 --log --out ";
  const int ca = run_cli(args + a.string());
  const int cb = run_cli(args + b.string());
  const std::string sa = slurp(a), sb = slurp(b);
  std::ostringstream in_process;
  write_csv(in_process, rows);
  const bool ok = ca == 0 && cb == 0 && !sa.empty() && sa == sb && sa == in_process.str();
  report(10, "determinism", ok,
         fmt("two CLI sweeps (%zu bytes each) %s, %s the in-process sweep",
             sa.size(), sa == sb ? "byte-identical" : "DIFFER",
             sa == in_process.str() ? "identical to" : "DIFFERENT from"));
}

}  // namespace

int main() {
  const Config cfg;
  SweepOptions opt;  // 20 log-spaced points over [1e5, 1e7], 1001 x 1001 oracle

  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_sweep(cfg, opt);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  sweep_criteria(rows, seconds);
  saturation_criterion(cfg);
  threshold_equivalence();
  surrogate_suite();
  penalty_convergence(cfg);
  projection_oracle();
  determinism(rows);

  std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
