#include "ftrack/analysis.hpp"
#include "ftrack/discretize.hpp"
#include "ftrack/errors.hpp"
#include "ftrack/step_function.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace ftrack;

namespace {

// Random staircase on [-X, X] with values in [0, 1].
StepFunction random_staircase(std::mt19937_64& rng, double X, int jumps) {
  std::uniform_real_distribution<double> pos(-X, X);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(jumps));
  for (auto& p : x) p = pos(rng);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  std::vector<double> v(x.size() + 1);
  for (auto& q : v) q = val(rng);
  return StepFunction(x, v);
}

double tv_oracle(const StepFunction& w) {
  double tv = 0.0;
  for (std::size_t i = 1; i < w.values().size(); ++i) tv += std::abs(w.values()[i] - w.values()[i - 1]);
  return tv;
}

// sup of |integral_{-inf}^x (a - b)| evaluated at every jump of either function,
// where the piecewise-linear difference attains its extrema.
double hat_gap_oracle(const StepFunction& a, const StepFunction& b, double X) {
  std::vector<double> x(a.jumps());
  x.insert(x.end(), b.jumps().begin(), b.jumps().end());
  double best = 0.0;
  for (double p : x) best = std::max(best, std::abs(a.integral(-X - 1.0, p) - b.integral(-X - 1.0, p)));
  return best;
}

}  // namespace

// bv_partition ----------------------------------------------------------------

TEST(BVPartition, ConstantDataIsUniform) {
  const auto p = bv_partition(StepFunction(0.3), 1.0, 0.25);
  ASSERT_EQ(p.points.size(), 9u);
  for (std::size_t i = 0; i < p.points.size(); ++i) EXPECT_NEAR(p.points[i], -1.0 + 0.25 * static_cast<double>(i), 1e-15);
  for (double v : p.cell_variation) EXPECT_EQ(v, 0.0);
}

TEST(BVPartition, SingleJumpAtOrigin) {
  const StepFunction u0({0.0}, {0.0, 1.0});
  const auto p = bv_partition(u0, 1.0, 0.5);
  EXPECT_TRUE(std::find(p.variation_points.begin(), p.variation_points.end(), 0.0) != p.variation_points.end());
  EXPECT_TRUE(std::find(p.points.begin(), p.points.end(), 0.0) != p.points.end());
  EXPECT_EQ(p.points.front(), -1.0);
  EXPECT_EQ(p.points.back(), 1.0);
  for (double v : p.cell_variation) EXPECT_LE(v, 0.5);
  EXPECT_LE(static_cast<double>(p.variation_points.size() - 1), 1.0 + 1.0 / 0.5);
}

TEST(BVPartition, LargeJumpInsideCellIsIsolated) {
  // A jump of size 1 between uniform points must become a partition point.
  const StepFunction u0({0.3}, {0.0, 1.0});
  const auto p = bv_partition(u0, 1.0, 0.5);
  EXPECT_TRUE(std::find(p.points.begin(), p.points.end(), 0.3) != p.points.end());
  for (double v : p.cell_variation) EXPECT_LE(v, 0.5);
}

TEST(BVPartition, RandomStaircasesSatisfyBothConditions) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const double X = 1.0 + trial % 3;
    const auto u0 = random_staircase(rng, X, 1 + trial % 25);
    const double delta = std::ldexp(1.0, -(1 + trial % 6));
    const auto p = bv_partition(u0, X, delta);
    const double tv = tv_oracle(u0);
    ASSERT_EQ(p.cell_variation.size() + 1, p.points.size());
    EXPECT_EQ(p.points.front(), -X);
    EXPECT_EQ(p.points.back(), X);
    for (std::size_t i = 1; i < p.points.size(); ++i) {
      EXPECT_GT(p.points[i], p.points[i - 1]);
      EXPECT_LE(p.points[i] - p.points[i - 1], delta * (1 + 1e-12));
      // Independent variation of u0 on the open cell.
      double var = 0.0;
      for (std::size_t k = 0; k < u0.jump_count(); ++k) {
        const double x = u0.jumps()[k];
        if (x > p.points[i - 1] && x < p.points[i]) var += std::abs(u0.values()[k + 1] - u0.values()[k]);
      }
      EXPECT_NEAR(p.cell_variation[i - 1], var, 1e-12);
      EXPECT_LE(var, delta + 1e-12);
    }
    // Points are xi_0 .. xi_M.
    EXPECT_LE(static_cast<double>(p.variation_points.size() - 1), 1.0 + tv / delta + 1e-12);
  }
}

TEST(BVPartition, RejectsBadInput) {
  EXPECT_THROW(bv_partition(StepFunction({2.0}, {0.0, 1.0}), 1.0, 0.5), InvalidInput);
  EXPECT_THROW(bv_partition(StepFunction(0.0), 0.0, 0.5), InvalidInput);
}

// project_restricted ------------------------------------------------------------

TEST(ProjectRestricted, ConstantStaysConstant) {
  const StepFunction c(0.4);
  const auto r = project_restricted(c, bv_partition(c, 1.0, 0.25));
  EXPECT_EQ(r.jump_count(), 0u);
  EXPECT_EQ(r.left_value(), 0.4);
}

TEST(ProjectRestricted, HeavisideAtPointOne) {
  const StepFunction u0({0.1}, {0.0, 1.0});
  const auto p = bv_partition(u0, 1.0, 0.5);
  const auto r = project_restricted(u0, p);
  for (double j : r.jumps())
    EXPECT_TRUE(std::find(p.points.begin(), p.points.end(), j) != p.points.end()) << j;
  EXPECT_LE(linf_hat_distance(u0, r, 0.0), 0.25);
  EXPECT_LE(hat_gap_oracle(u0, r, 1.0), 0.25);
  EXPECT_NEAR(linf_hat_distance(u0, r, 0.0), hat_gap_oracle(u0, r, 1.0), 1e-15);
}

TEST(ProjectRestricted, RandomStaircaseBounds) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const double X = 1.0 + trial % 2;
    const auto u0 = random_staircase(rng, X, 1 + trial % 30);
    const double delta = std::ldexp(1.0, -(1 + trial % 7));
    const auto p = bv_partition(u0, X, delta);
    const auto r = project_restricted(u0, p);
    EXPECT_EQ(r.left_value(), u0.left_value());
    EXPECT_EQ(r.right_value(), u0.right_value());
    EXPECT_LE(tv_oracle(r), tv_oracle(u0) + 1e-12);
    const double l1 = l1_distance(u0, r);
    EXPECT_LE(l1, delta * tv_oracle(u0) + 1e-12);
    EXPECT_LE(l1, 2.0 * X * delta + 1e-12);
    const double hat = hat_gap_oracle(u0, r, X);
    EXPECT_LE(hat, delta * delta + 1e-12);
    EXPECT_NEAR(linf_hat_distance(u0, r, u0.left_value()), hat, 1e-12);
    // Hats agree at every partition point.
    for (double z : p.points) EXPECT_NEAR(u0.integral(-X, z), r.integral(-X, z), 1e-12);
    for (double j : r.jumps()) {
      EXPECT_GE(j, -X);
      EXPECT_LE(j, X);
    }
  }
}

TEST(ProjectUniform, GenericDataL1IsOrderDelta) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u0 = random_staircase(rng, 1.0, 10);
    for (double delta : {0.25, 0.0625}) {
      const auto r = project_uniform(u0, 1.0, delta);
      EXPECT_EQ(r.left_value(), u0.left_value());
      EXPECT_EQ(r.right_value(), u0.right_value());
      EXPECT_LE(l1_distance(u0, r), delta * tv_oracle(u0) + 1e-12);
      EXPECT_LE(tv_oracle(r), tv_oracle(u0) + 1e-12);
    }
  }
}

// project_cells -------------------------------------------------------------------

TEST(ProjectCells, ConstantRow) {
  const auto row = project_cells(StepFunction(0.7), 0.1, -5, 5);
  ASSERT_EQ(row.size(), 11);
  for (Eigen::Index i = 0; i < row.size(); ++i) EXPECT_DOUBLE_EQ(row[i], 0.7);
}

TEST(ProjectCells, JumpAtOriginWithUnitMesh) {
  const StepFunction u0({0.0}, {0.2, 0.8});
  const auto row = project_cells(u0, 1.0, -2, 2);
  EXPECT_DOUBLE_EQ(row[0], 0.2);
  EXPECT_DOUBLE_EQ(row[1], 0.2);
  EXPECT_DOUBLE_EQ(row[2], 0.5);
  EXPECT_DOUBLE_EQ(row[3], 0.8);
  EXPECT_DOUBLE_EQ(row[4], 0.8);
}

TEST(ProjectCells, RandomTvNonincreasing) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u0 = random_staircase(rng, 1.0, 12);
    const double dx = std::ldexp(1.0, -(2 + trial % 6));
    const long n = static_cast<long>(std::ceil(1.0 / dx)) + 2;
    const auto row = project_cells(u0, dx, -n, n);
    EXPECT_LE(total_variation(row, u0.left_value(), u0.right_value()), tv_oracle(u0) + 1e-12);
    // Mass: sum of averages times dx equals the exact integral over the window.
    const double lo = (-n - 0.5) * dx, hi = (n + 0.5) * dx;
    EXPECT_NEAR(row.sum() * dx, u0.integral(lo, hi), 1e-12);
  }
}

// indefinite_integral --------------------------------------------------------------

TEST(IndefiniteIntegral, ConstantIsZero) {
  const auto h = indefinite_integral(StepFunction(0.3), 0.3);
  for (double x : {-5.0, 0.0, 7.0}) EXPECT_EQ(h(x), 0.0);
}

TEST(IndefiniteIntegral, HeavisideIsRamp) {
  const auto h = indefinite_integral(StepFunction({0.0}, {0.0, 1.0}), 0.0);
  for (double x : {-3.0, -0.5, 0.0, 0.25, 2.0}) EXPECT_DOUBLE_EQ(h(x), std::max(x, 0.0));
}

TEST(IndefiniteIntegral, DivergentFarField) {
  EXPECT_THROW(indefinite_integral(StepFunction({0.0}, {0.1, 1.0}), 0.0), DivergentIntegral);
}

TEST(IndefiniteIntegral, MatchesProjectionAtPartitionPoints) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u0 = random_staircase(rng, 1.0, 15);
    const auto p = bv_partition(u0, 1.0, 0.125);
    const auto r = project_restricted(u0, p);
    const auto a = indefinite_integral(u0, u0.left_value());
    const auto b = indefinite_integral(r, r.left_value());
    for (double z : p.points) EXPECT_NEAR(a(z), b(z), 1e-12);
    for (double z : p.points) EXPECT_NEAR(a(z), u0.integral(-2.0, z) - u0.left_value() * (z + 2.0), 1e-12);
  }
}

TEST(SampleStaircase, ReproducesStepData) {
  const auto w = sample_staircase([](double x) { return x < 0.25 ? 0.1 : 0.9; }, 1.0, 0.1, 0.9, 64);
  ASSERT_EQ(w.jump_count(), 1u);
  EXPECT_TRUE(w.jumps()[0] >= 0.25 - 1.0 / 32 && w.jumps()[0] <= 0.25 + 1.0 / 32);
}
