// Command-line front end: solve, sweep, oracle, compare.
//
// Exit codes:
//   0  success (solve: converged)
//   1  usage or configuration error
//   2  infeasible
//   3  iteration cap reached before convergence

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "semrelay/semrelay.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIterationCap = 3;

semrelay::Config load(const std::string& path, std::optional<double> W) {
  semrelay::Config cfg = path.empty() ? semrelay::Config{} : semrelay::load_config(path);
  if (W) {
    cfg.system.W = *W;
    semrelay::validate(cfg);
  }
  return cfg;
}

int cmd_solve(const semrelay::Config& cfg) {
  const auto rep = semrelay::run(cfg.system, cfg.fit, cfg.penalty);
  const auto& x = rep.best;
  std::printf("status          %s\n", semrelay::to_string(rep.status));
  if (rep.status == semrelay::SolveStatus::kInfeasible) {
    std::printf("no placement/bandwidth split meets eps_bar = %g\n", cfg.fit.eps_bar);
    return kExitInfeasible;
  }
  const double eps = semrelay::semantic_similarity(cfg.fit, x.gamma_br_db);
  std::printf("W               %.6e Hz\n", cfg.system.W);
  std::printf("eta             %.9e bit/s\n", x.eta);
  std::printf("d_br d_ru       %.9f %.9f m\n", x.d_br, x.d_ru);
  std::printf("alpha_br alpha_ru %.9f %.9f\n", x.alpha_br, x.alpha_ru);
  std::printf("gamma_br        %.6f dB\n", x.gamma_br_db);
  std::printf("similarity      %.6f\n", eps);
  std::printf("semantic rate   %.6e suts/s\n",
              semrelay::semantic_rate(cfg.system, cfg.fit, x.alpha_br, eps,
                                      cfg.suts_per_word));
  std::printf("zeta            %.3e\n", rep.zeta);
  std::printf("iterations      %d outer, %d inner\n", rep.outer_iters, rep.inner_iters);
  return rep.status == semrelay::SolveStatus::kConverged ? kExitOk : kExitIterationCap;
}

int cmd_sweep(const semrelay::Config& cfg, const semrelay::SweepOptions& opt,
              const std::string& out_path) {
  const auto rows = semrelay::run_sweep(cfg, opt);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
    return kExitUsage;
  }
  semrelay::write_csv(out, rows);
  std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
  return kExitOk;
}

int cmd_oracle(const semrelay::Config& cfg, int grid) {
  const auto r = semrelay::oracle::oracle_search(cfg.system, cfg.fit, {grid, grid});
  if (!r.feasible) {
    std::printf("status   infeasible\n");
    return kExitInfeasible;
  }
  const auto& x = r.point;
  std::printf("grid     %d x %d\n", grid, grid);
  std::printf("W        %.6e Hz\n", cfg.system.W);
  std::printf("eta      %.9e bit/s\n", x.eta);
  std::printf("d_br d_ru %.6f %.6f m\n", x.d_br, x.d_ru);
  std::printf("alpha_br alpha_ru %.6f %.6f\n", x.alpha_br, x.alpha_ru);
  std::printf("gamma_br %.6f dB\n", x.gamma_br_db);
  return kExitOk;
}

int cmd_compare(const semrelay::Config& cfg) {
  std::printf("W = %.6e Hz\n", cfg.system.W);
  std::fputs(semrelay::format_compare_table(semrelay::compare_schemes(cfg)).c_str(),
             stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relay placement and bandwidth split for a semantic relay link"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> W;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file")
        ->check(CLI::ExistingFile);
  };

  auto* solve = app.add_subcommand("solve", "run the penalty solver");
  add_common(solve);
  solve->add_option("--W", W, "total bandwidth [Hz]")->check(CLI::PositiveNumber);

  semrelay::SweepOptions sweep_opt;
  std::string out_path;
  bool linear = false;
  auto* sweep = app.add_subcommand("sweep", "evaluate all schemes over a bandwidth range");
  add_common(sweep);
  sweep->add_option("--w-min", sweep_opt.w_min, "smallest bandwidth [Hz]")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--w-max", sweep_opt.w_max, "largest bandwidth [Hz]")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--points", sweep_opt.n_points, "number of bandwidths")
      ->check(CLI::Range(2, 100000));
  auto* log_flag = sweep->add_flag("--log", "logarithmic spacing (default)");
  sweep->add_flag("--linear", linear, "linear spacing")->excludes(log_flag);
  sweep->add_option("--out", out_path, "CSV output path")->required();

  int grid = 1001;
  auto* oracle = app.add_subcommand("oracle", "exhaustive grid search");
  add_common(oracle);
  oracle->add_option("--grid", grid, "grid points per axis")->check(CLI::Range(2, 100001));
  oracle->add_option("--W", W, "total bandwidth [Hz]")->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("compare", "all schemes at one bandwidth");
  add_common(compare);
  compare->add_option("--W", W, "total bandwidth [Hz]")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto cfg = load(config_path, W);
    if (solve->parsed()) return cmd_solve(cfg);
    if (sweep->parsed()) {
      sweep_opt.log_spacing = !linear;
      sweep_opt.validate();
      return cmd_sweep(cfg, sweep_opt, out_path);
    }
    if (oracle->parsed()) return cmd_oracle(cfg, grid);
    if (compare->parsed()) return cmd_compare(cfg);
  } catch (const semrelay::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
