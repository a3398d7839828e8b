#pragma once

// Bandwidth sweeps over all five schemes, CSV emission/parsing and the
// single-bandwidth comparison table used by the command-line tool.

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "semrelay/config.hpp"
#include "semrelay/oracle_baselines.hpp"
#include "semrelay/penalty_solver.hpp"

namespace semrelay {

struct SweepOptions {
  double w_min = 1e5;
  double w_max = 1e7;
  int n_points = 20;
  bool log_spacing = true;
  oracle::GridSpec oracle_grid{1001, 1001};
  oracle::GridSpec df_grid{1001, 1001};
  int n_line = 10001;  // resolution of the 1-D baseline searches

  void validate() const {
    if (!(w_min > 0) || !std::isfinite(w_max) || !(w_max >= w_min)) {
      throw std::invalid_argument("sweep: need 0 < w_min <= w_max");
    }
    if (n_points < 2) throw std::invalid_argument("sweep: points must be >= 2");
    oracle_grid.validate();
    df_grid.validate();
    if (n_line < 2) throw std::invalid_argument("sweep: n_line must be >= 2");
  }
};

/// One bandwidth of a sweep. Infeasible schemes carry NaN rates and the
/// status string "infeasible"; a scheme that threw carries "error".
struct SweepRow {
  double W = 0.0;
  double eta_penalty = 0.0;
  double eta_oracle = 0.0;
  double eta_equal_bw = 0.0;
  double eta_fixed_place = 0.0;
  double eta_df = 0.0;
  double alpha_br_opt = 0.0;  // penalty solver decisions
  double d_br_opt = 0.0;
  double alpha_br_oracle = 0.0;
  double d_br_oracle = 0.0;
  double zeta = 0.0;
  std::string status_penalty;
  std::string status_oracle;
  std::string status_equal_bw;
  std::string status_fixed_place;
  std::string status_df;
};

inline constexpr const char* kSweepHeader =
    "W,eta_penalty,eta_oracle,eta_equal_bw,eta_fixed_place,eta_df,"
    "alpha_br_opt,d_br_opt,alpha_br_oracle,d_br_oracle,zeta,"
    "status_penalty,status_oracle,status_equal_bw,status_fixed_place,status_df";

inline std::vector<double> bandwidth_points(double w_min, double w_max, int n,
                                            bool log_spacing) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    w[i] = log_spacing
               ? std::exp(std::log(w_min) + t * (std::log(w_max) - std::log(w_min)))
               : w_min + t * (w_max - w_min);
  }
  w.front() = w_min;
  w.back() = w_max;
  return w;
}

namespace detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Fn>
void guarded(std::string& status, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception&) {
    status = "error";
  }
}

inline void take(const oracle::SchemeResult& r, double& eta, std::string& status) {
  eta = r.feasible ? r.point.eta : kNaN;
  status = r.feasible ? "ok" : "infeasible";
}

}  // namespace detail

inline SweepRow evaluate_row(const Config& cfg, double W,
                             const SweepOptions& opt = {}) {
  SystemParams p = cfg.system;
  p.W = W;
  SweepRow row;
  row.W = W;
  row.eta_penalty = row.eta_oracle = row.eta_equal_bw = row.eta_fixed_place =
      row.eta_df = detail::kNaN;
  row.alpha_br_opt = row.d_br_opt = row.alpha_br_oracle = row.d_br_oracle =
      row.zeta = detail::kNaN;

  detail::guarded(row.status_penalty, [&] {
    const auto rep = run(p, cfg.fit, cfg.penalty);
    row.status_penalty = to_string(rep.status);
    if (rep.status != SolveStatus::kInfeasible) {
      row.eta_penalty = rep.best.eta;
      row.alpha_br_opt = rep.best.alpha_br;
      row.d_br_opt = rep.best.d_br;
      row.zeta = rep.zeta;
    }
  });
  detail::guarded(row.status_oracle, [&] {
    const auto r = oracle::oracle_search(p, cfg.fit, opt.oracle_grid);
    detail::take(r, row.eta_oracle, row.status_oracle);
    if (r.feasible) {
      row.alpha_br_oracle = r.point.alpha_br;
      row.d_br_oracle = r.point.d_br;
    }
  });
  detail::guarded(row.status_equal_bw, [&] {
    detail::take(oracle::equal_bandwidth_search(p, cfg.fit, opt.n_line),
                 row.eta_equal_bw, row.status_equal_bw);
  });
  detail::guarded(row.status_fixed_place, [&] {
    detail::take(oracle::fixed_placement_search(p, cfg.fit, opt.n_line),
                 row.eta_fixed_place, row.status_fixed_place);
  });
  detail::guarded(row.status_df, [&] {
    detail::take(oracle::df_search(p, opt.df_grid), row.eta_df, row.status_df);
  });
  return row;
}

/// Rows in ascending W order.
inline std::vector<SweepRow> run_sweep(const Config& cfg, const SweepOptions& opt) {
  opt.validate();
  std::vector<SweepRow> rows;
  for (double W : bandwidth_points(opt.w_min, opt.w_max, opt.n_points, opt.log_spacing)) {
    rows.push_back(evaluate_row(cfg, W, opt));
  }
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    for (double v : {r.W, r.eta_penalty, r.eta_oracle, r.eta_equal_bw,
                     r.eta_fixed_place, r.eta_df, r.alpha_br_opt, r.d_br_opt,
                     r.alpha_br_oracle, r.d_br_oracle, r.zeta}) {
      out << (std::isnan(v) ? std::string("nan") : detail::format_double(v)) << ',';
    }
    out << r.status_penalty << ',' << r.status_oracle << ',' << r.status_equal_bw
        << ',' << r.status_fixed_place << ',' << r.status_df << '\n';
  }
}

inline std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) {
    throw std::runtime_error("sweep csv: unexpected header");
  }
  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 16) {
      throw std::runtime_error("sweep csv: line " + std::to_string(line_no) +
                               ": expected 16 fields");
    }
    auto num = [&](std::size_t i) {
      if (cells[i] == "nan") return detail::kNaN;
      std::size_t used = 0;
      const double v = std::stod(cells[i], &used);
      if (used != cells[i].size()) {
        throw std::runtime_error("sweep csv: line " + std::to_string(line_no) +
                                 ": bad number '" + cells[i] + "'");
      }
      return v;
    };
    SweepRow r;
    r.W = num(0);
    r.eta_penalty = num(1);
    r.eta_oracle = num(2);
    r.eta_equal_bw = num(3);
    r.eta_fixed_place = num(4);
    r.eta_df = num(5);
    r.alpha_br_opt = num(6);
    r.d_br_opt = num(7);
    r.alpha_br_oracle = num(8);
    r.d_br_oracle = num(9);
    r.zeta = num(10);
    r.status_penalty = cells[11];
    r.status_oracle = cells[12];
    r.status_equal_bw = cells[13];
    r.status_fixed_place = cells[14];
    r.status_df = cells[15];
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------

struct CompareRow {
  std::string scheme;
  DesignPoint point;
  std::string status;
};

/// All five schemes at the configured bandwidth.
inline std::vector<CompareRow> compare_schemes(const Config& cfg,
                                               const SweepOptions& opt = {}) {
  const SystemParams& p = cfg.system;
  std::vector<CompareRow> rows;

  const auto rep = run(p, cfg.fit, cfg.penalty);
  rows.push_back({"penalty", rep.best, to_string(rep.status)});

  auto add = [&rows](const char* name, const oracle::SchemeResult& r) {
    rows.push_back({name, r.point, r.feasible ? "ok" : "infeasible"});
  };
  add("oracle", oracle::oracle_search(p, cfg.fit, opt.oracle_grid));
  add("equal_bw", oracle::equal_bandwidth_search(p, cfg.fit, opt.n_line));
  add("fixed_place", oracle::fixed_placement_search(p, cfg.fit, opt.n_line));
  add("df", oracle::df_search(p, opt.df_grid));
  return rows;
}

inline std::string format_compare_table(const std::vector<CompareRow>& rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %14s %9s %9s %9s %9s %9s  %s\n", "scheme",
                "eta[bit/s]", "d_br", "d_ru", "alpha_br", "alpha_ru",
                "gamma_dB", "status");
  out += buf;
  for (const auto& r : rows) {
    const auto& x = r.point;
    std::snprintf(buf, sizeof buf,
                  "%-12s %14.6e %9.4f %9.4f %9.6f %9.6f %9.4f  %s\n",
                  r.scheme.c_str(), x.eta, x.d_br, x.d_ru, x.alpha_br,
                  x.alpha_ru, x.gamma_br_db, r.status.c_str());
    out += buf;
  }
  return out;
}

}  // namespace semrelay
