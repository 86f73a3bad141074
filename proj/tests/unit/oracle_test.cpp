#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "boxqp/bench.hpp"
#include "boxqp/oracle.hpp"

namespace boxqp {
namespace {

TEST(SolveGlobal, BlOptimum) {
  const GlobalSolution s = solve_global(builtin_bl());
  EXPECT_NEAR(s.value, 1.0, 1e-12);
  EXPECT_NEAR(feasible_value(builtin_bl(), s.x), s.value, 1e-12);
  EXPECT_EQ(s.pattern.size(), 3U);
}

TEST(SolveGlobal, LinearObjectivePicksVertices) {
  const BoxQpInstance inst(Matrix::Zero(4, 4), Vector{{1.0, -2.0, 3.0, -0.5}});
  const GlobalSolution s = solve_global(inst);
  EXPECT_DOUBLE_EQ(s.value, 4.0);
  EXPECT_EQ(s.x, (Vector{{1.0, 0.0, 1.0, 0.0}}));
  EXPECT_EQ(s.pattern, (ActivePattern{BoundState::kAtOne, BoundState::kAtZero, BoundState::kAtOne,
                                      BoundState::kAtZero}));
}

TEST(SolveGlobal, ConcaveInteriorMaximum) {
  // -(x - 1/2)^2 summed: max 0 at the centre.
  const int n = 4;
  const BoxQpInstance inst(-Matrix::Identity(n, n), Vector::Ones(n));
  const GlobalSolution s = solve_global(inst);
  EXPECT_NEAR(s.value, 0.25 * n, 1e-12);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(s.x[i], 0.5, 1e-12);
}

TEST(SolveGlobal, SingularFaces) {
  // Q = 0 on a pair with a flat direction: every face has a singular Hessian.
  Matrix Q = Matrix::Zero(3, 3);
  Q(0, 1) = Q(1, 0) = 1.0;
  const BoxQpInstance inst(Q, Vector{{-1.0, -1.0, 0.0}});
  EXPECT_NEAR(solve_global(inst).value, 0.0, 1e-12);
}

TEST(SolveGlobal, RandomPointsNeverBeatIt) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 1; k <= 20; ++k) {
    const BoxQpInstance inst = generate({6, 75, k, 5});
    const double opt = solve_global(inst).value;
    for (int s = 0; s < 2000; ++s) {
      Vector x(6);
      for (int i = 0; i < 6; ++i) x[i] = u(rng);
      ASSERT_LE(feasible_value(inst, x), opt + 1e-9);
    }
    for (int v = 0; v < 64; ++v) {
      Vector x(6);
      for (int i = 0; i < 6; ++i) x[i] = (v >> i) & 1;
      ASSERT_LE(feasible_value(inst, x), opt + 1e-9);
    }
  }
}

TEST(SolveGlobal, InvariantUnderPermutationAndSwitching) {
  std::mt19937_64 rng(8);
  for (int k = 1; k <= 10; ++k) {
    const BoxQpInstance inst = generate({7, 60, k, 13});
    const double opt = solve_global(inst).value;
    std::vector<int> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix P = Matrix::Zero(7, 7);
    for (int i = 0; i < 7; ++i) P(i, perm[i]) = 1.0;
    const BoxQpInstance permuted(P * inst.Q() * P.transpose(), P * inst.q());
    EXPECT_NEAR(solve_global(permuted).value, opt, 1e-9 * (1.0 + std::abs(opt)));
    // x_0 -> 1 - x_0: x = D y + e_0 with D = diag(-1, 1, ...).
    Matrix D = Matrix::Identity(7, 7);
    D(0, 0) = -1.0;
    Vector e = Vector::Zero(7);
    e[0] = 1.0;
    const double c = e.dot(inst.Q() * e) + inst.q().dot(e);
    const Vector qs = D * (2.0 * inst.Q() * e + inst.q());
    const BoxQpInstance switched(D * inst.Q() * D, qs);
    EXPECT_NEAR(solve_global(switched).value + c, opt, 1e-9 * (1.0 + std::abs(opt)));
  }
}

TEST(SolveGlobal, DimensionBudget) {
  const BoxQpInstance big(Matrix::Zero(13, 13), Vector::Zero(13));
  EXPECT_THROW(solve_global(big), std::invalid_argument);
  EXPECT_THROW(solve_global(generate({6, 50, 1, 1}), 5), std::invalid_argument);
}

TEST(CertifyBound, BlPsdRltTri) {
  const GapReport r = certify_bound(builtin_bl(), 1.09291);
  EXPECT_NEAR(r.optimum, 1.0, 1e-12);
  EXPECT_NEAR(r.optimality_gap, 0.09291, 1e-9);
  EXPECT_NEAR(r.feasible_gap, 0.09291, 1e-9);
  const GapReport f = certify_bound(builtin_bl(), 1.09291, 0.5);
  EXPECT_NEAR(f.feasible_gap, 0.59291, 1e-9);
}

}  // namespace
}  // namespace boxqp
