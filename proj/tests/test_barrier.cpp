#include <gtest/gtest.h>

#include <cmath>

#include "semrelay/barrier.hpp"

namespace barrier = semrelay::barrier;

namespace {

// maximize x + y  s.t.  x^2 + y^2 <= 1,  x <= 0.5
struct DiskWithCut {
  static constexpr int kDim = 2;
  static constexpr std::size_t kConstraints = 2;
  using V = barrier::Vec<2>;
  using F = barrier::SecondOrder<2>;

  double objective_value(const V& x) const { return x[0] + x[1]; }
  F objective(const V& x) const {
    F f;
    f.value = objective_value(x);
    f.grad << 1, 1;
    return f;
  }
  std::array<double, 2> constraint_values(const V& x) const {
    return {x.squaredNorm() - 1.0, x[0] - 0.5};
  }
  std::array<F, 2> constraints(const V& x) const {
    std::array<F, 2> c;
    const auto v = constraint_values(x);
    c[0].value = v[0];
    c[0].grad = 2 * x;
    c[0].hess = 2 * barrier::Mat<2>::Identity();
    c[1].value = v[1];
    c[1].grad << 1, 0;
    return c;
  }
};

// maximize -(x - 3)^2  s.t.  x <= 2
struct ClippedParabola {
  static constexpr int kDim = 1;
  static constexpr std::size_t kConstraints = 1;
  using V = barrier::Vec<1>;
  using F = barrier::SecondOrder<1>;

  double objective_value(const V& x) const { return -(x[0] - 3) * (x[0] - 3); }
  F objective(const V& x) const {
    F f;
    f.value = objective_value(x);
    f.grad << -2 * (x[0] - 3);
    f.hess << -2;
    return f;
  }
  std::array<double, 1> constraint_values(const V& x) const { return {x[0] - 2}; }
  std::array<F, 1> constraints(const V& x) const {
    std::array<F, 1> c;
    c[0].value = x[0] - 2;
    c[0].grad << 1;
    return c;
  }
};

TEST(Barrier, LinearObjectiveOverCutDisk) {
  barrier::Vec<2> x0(0.0, 0.0);
  const auto r = barrier::maximize(DiskWithCut{}, x0);
  ASSERT_EQ(r.status, barrier::Status::kOptimal);
  // optimum on the cut line: x = 0.5, y = sqrt(0.75)
  EXPECT_NEAR(r.x[0], 0.5, 1e-7);
  EXPECT_NEAR(r.x[1], std::sqrt(0.75), 1e-7);
  EXPECT_NEAR(r.objective, 0.5 + std::sqrt(0.75), 1e-8);
  EXPECT_LT(r.gap, 1e-9);
}

TEST(Barrier, ActiveBoundOnConcaveObjective) {
  barrier::Vec<1> x0;
  x0 << -5.0;
  const auto r = barrier::maximize(ClippedParabola{}, x0);
  ASSERT_EQ(r.status, barrier::Status::kOptimal);
  EXPECT_NEAR(r.x[0], 2.0, 1e-8);
}

TEST(Barrier, InfeasibleStartIsReported) {
  barrier::Vec<2> x0(2.0, 0.0);
  EXPECT_EQ(barrier::maximize(DiskWithCut{}, x0).status,
            barrier::Status::kInfeasibleStart);
}

TEST(Barrier, NewtonBudget) {
  barrier::Options opt;
  opt.max_newton_total = 3;
  barrier::Vec<2> x0(0.0, 0.0);
  const auto r = barrier::maximize(DiskWithCut{}, x0, opt);
  EXPECT_EQ(r.status, barrier::Status::kMaxIterations);
  EXPECT_EQ(r.newton_iterations, 3);
  EXPECT_LT(r.x.squaredNorm(), 1.0);
}

}  // namespace
