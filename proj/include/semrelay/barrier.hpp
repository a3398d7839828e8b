#pragma once

// Dense log-barrier interior-point method for small smooth convex programs:
//
//   maximize   f0(x)          (concave)
//   subject to fi(x) <= 0     (convex), i = 1..M
//
// Each centering step minimises  -t*f0(x) - sum log(-fi(x))  by damped Newton
// iteration; t grows by `t_factor` until the duality measure M/t drops below
// `gap_tol`. A strictly feasible start is the caller's responsibility.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>

namespace semrelay::barrier {

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;
template <int N>
using Mat = Eigen::Matrix<double, N, N>;

/// Value, gradient and Hessian of a scalar function at one point.
template <int N>
struct SecondOrder {
  double value = 0.0;
  Vec<N> grad = Vec<N>::Zero();
  Mat<N> hess = Mat<N>::Zero();
};

template <typename P>
concept Problem = requires(const P& p, const Vec<P::kDim>& x) {
  { P::kDim } -> std::convertible_to<int>;
  { P::kConstraints } -> std::convertible_to<std::size_t>;
  { p.objective(x) } -> std::same_as<SecondOrder<P::kDim>>;
  { p.objective_value(x) } -> std::same_as<double>;
  { p.constraints(x) } -> std::same_as<std::array<SecondOrder<P::kDim>, P::kConstraints>>;
  { p.constraint_values(x) } -> std::same_as<std::array<double, P::kConstraints>>;
};

struct Options {
  double t0 = 1.0;
  double t_factor = 10.0;
  double gap_tol = 1e-9;
  double newton_tol = 1e-10;  // half squared Newton decrement
  int max_newton_per_center = 200;
  int max_newton_total = 4000;
  double armijo = 0.01;
  double backtrack = 0.5;
};

enum class Status { kOptimal, kMaxIterations, kInfeasibleStart };

template <int N>
struct Result {
  Vec<N> x;
  double objective = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  int newton_iterations = 0;
  Status status = Status::kOptimal;
};

namespace detail {

template <std::size_t M>
bool strictly_feasible(const std::array<double, M>& f) {
  for (double v : f) {
    if (!(v < 0.0)) return false;
  }
  return true;
}

template <Problem P>
double barrier_value(const P& prob, const Vec<P::kDim>& x, double t) {
  const auto f = prob.constraint_values(x);
  if (!strictly_feasible(f)) return std::numeric_limits<double>::infinity();
  double phi = -t * prob.objective_value(x);
  for (double v : f) phi -= std::log(-v);
  return phi;
}

}  // namespace detail

template <Problem P>
Result<P::kDim> maximize(const P& prob, Vec<P::kDim> x,
                         const Options& opt = {}) {
  constexpr int N = P::kDim;
  constexpr double m = static_cast<double>(P::kConstraints);

  Result<N> res;
  if (!detail::strictly_feasible(prob.constraint_values(x))) {
    res.x = x;
    res.status = Status::kInfeasibleStart;
    return res;
  }

  double t = opt.t0;
  bool budget_exhausted = false;
  while (true) {
    for (int it = 0; it < opt.max_newton_per_center; ++it) {
      if (res.newton_iterations >= opt.max_newton_total) {
        budget_exhausted = true;
        break;
      }
      ++res.newton_iterations;

      const auto f0 = prob.objective(x);
      Vec<N> g = -t * f0.grad;
      Mat<N> h = -t * f0.hess;
      for (const auto& fi : prob.constraints(x)) {
        const double inv = -1.0 / fi.value;  // > 0
        g += inv * fi.grad;
        h += inv * fi.hess + (inv * inv) * fi.grad * fi.grad.transpose();
      }

      Eigen::LDLT<Mat<N>> ldlt(h);
      Vec<N> step = -ldlt.solve(g);
      if (ldlt.info() != Eigen::Success || !step.allFinite() ||
          g.dot(step) >= 0.0) {
        // Regularise toward a scaled gradient step.
        const double shift = 1e-12 * (h.diagonal().cwiseAbs().maxCoeff() + 1.0);
        Mat<N> hr = h;
        hr.diagonal().array() += shift;
        step = -hr.ldlt().solve(g);
        if (!step.allFinite() || g.dot(step) >= 0.0) step = -g;
      }

      const double decrement = -g.dot(step);
      if (decrement / 2.0 <= opt.newton_tol) break;

      const double phi = detail::barrier_value(prob, x, t);
      double s = 1.0;
      bool accepted = false;
      while (s > 1e-16) {
        const Vec<N> trial = x + s * step;
        const double phi_trial = detail::barrier_value(prob, trial, t);
        if (std::isfinite(phi_trial) &&
            phi_trial <= phi - opt.armijo * s * decrement +
                             1e-15 * std::abs(phi)) {
          x = trial;
          accepted = true;
          break;
        }
        s *= opt.backtrack;
      }
      // No progress representable in double precision: treat as centred.
      if (!accepted) break;
    }

    res.gap = m / t;
    if (budget_exhausted || res.gap < opt.gap_tol) break;
    t *= opt.t_factor;
  }

  res.x = x;
  res.objective = prob.objective_value(x);
  res.status = budget_exhausted ? Status::kMaxIterations : Status::kOptimal;
  return res;
}

}  // namespace semrelay::barrier
