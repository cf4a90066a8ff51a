#include "ftrack/errors.hpp"
#include "ftrack/flux.hpp"
#include "ftrack/godunov.hpp"
#include "ftrack/riemann.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ftrack;

namespace {

PiecewiseLinearFlux traffic_pl(double k, double delta) {
  BreakpointOptions o{delta};
  o.extra = {0.5};
  return interpolate(traffic_flux(k), o);
}

void expect_valid_fan(const PiecewiseLinearFlux& q, const WaveFan& fan, double ul, double ur) {
  if (ul == ur) {
    EXPECT_TRUE(fan.empty());
    return;
  }
  ASSERT_FALSE(fan.empty());
  EXPECT_EQ(fan.fronts.front().left, ul);
  EXPECT_EQ(fan.fronts.back().right, ur);
  for (std::size_t i = 0; i < fan.fronts.size(); ++i) {
    const auto& w = fan.fronts[i];
    const double scale = std::max(1.0, std::abs(q(w.right)) + std::abs(q(w.left)));
    EXPECT_NEAR(w.speed * (w.right - w.left), q(w.right) - q(w.left), kRankineHugoniotTolerance * scale);
    if (i > 0) {
      EXPECT_GT(w.speed, fan.fronts[i - 1].speed);
      EXPECT_EQ(w.left, fan.fronts[i - 1].right);
    }
  }
  EXPECT_LE(rankine_hugoniot_defect(q, fan), kRankineHugoniotTolerance);
}

// Oleinik entropy condition checked pointwise: for a shock ul -> ur with speed s,
// the chord lies below q on [ul, ur] when ul < ur and above it otherwise.
void expect_entropy(const PiecewiseLinearFlux& q, const WaveFan& fan) {
  for (const auto& w : fan.fronts) {
    const double lo = std::min(w.left, w.right), hi = std::max(w.left, w.right);
    for (int i = 0; i <= 200; ++i) {
      const double u = lo + (hi - lo) * i / 200.0;
      const double chord = q(w.left) + w.speed * (u - w.left);
      if (w.left < w.right) EXPECT_LE(chord, q(u) + 1e-12);
      else EXPECT_GE(chord, q(u) - 1e-12);
    }
  }
}

// Godunov oracle: steady cell values two cells away from the interface.
std::pair<double, double> godunov_traces(const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f, double ul,
                                         double ur, double dx) {
  const StepFunction u0(std::vector<double>{0.0}, std::vector<double>{ul, ur});
  const auto grid = run_godunov(g, f, ul == ur ? StepFunction(ul) : u0, 1.0, 0.25, dx);
  return {grid.value(-2), grid.value(2)};
}

// Literal evaluation of the Gamma condition: u_G scanned over a dense grid of
// co(u-, u+) plus all breakpoints. Witnesses can sit strictly between
// breakpoints. For fixed u_G the z-condition is exact: a piecewise-linear
// function is bounded on an interval iff it is bounded at the ends and
// interior breakpoints.
bool gamma_oracle(const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f, double um, double up) {
  if (std::abs(g(um) - f(up)) > kFluxLevelTolerance) return false;
  const double lo = std::min(um, up), hi = std::max(um, up);
  std::vector<double> cand{um, up};
  for (int i = 0; i <= 20000; ++i) cand.push_back(lo + (hi - lo) * i / 20000.0);
  for (Eigen::Index k = 0; k < g.size(); ++k) cand.push_back(g.breakpoints()[k]);
  for (Eigen::Index k = 0; k < f.size(); ++k) cand.push_back(f.breakpoints()[k]);
  auto holds = [](const PiecewiseLinearFlux& q, double from, double to, double sign, double base) {
    const double a = std::min(from, to), b = std::max(from, to);
    if (sign * (q(a) - base) < -1e-12 || sign * (q(b) - base) < -1e-12) return false;
    for (Eigen::Index k = 0; k < q.size(); ++k) {
      const double z = q.breakpoints()[k];
      if (z > a && z < b && sign * (q(z) - base) < -1e-12) return false;
    }
    return true;
  };
  for (double ug : cand) {
    if (ug < lo || ug > hi) continue;
    if (holds(f, up, ug, up - ug, f(up)) && holds(g, um, ug, ug - um, g(um))) return true;
  }
  return false;
}

}  // namespace

// solve_classic -----------------------------------------------------------------

TEST(SolveClassic, EqualStatesGiveEmptyFan) {
  const auto q = traffic_pl(1.0, 0.5);
  EXPECT_TRUE(solve_classic(q, 0.3, 0.3).empty());
}

TEST(SolveClassic, ConcaveChordIsStationaryShock) {
  const auto q = interpolate(traffic_flux(1.0), BreakpointOptions{0.5});
  const auto fan = solve_classic(q, 0.0, 1.0);
  ASSERT_EQ(fan.fronts.size(), 1u);
  EXPECT_DOUBLE_EQ(fan.fronts[0].speed, 0.0);
  expect_valid_fan(q, fan, 0.0, 1.0);
}

TEST(SolveClassic, ConcaveRarefactionSplitsAtBreakpoint) {
  const auto q = interpolate(traffic_flux(1.0), BreakpointOptions{0.5});
  const auto fan = solve_classic(q, 1.0, 0.0);
  ASSERT_EQ(fan.fronts.size(), 2u);
  EXPECT_DOUBLE_EQ(fan.fronts[0].speed, -0.5);
  EXPECT_DOUBLE_EQ(fan.fronts[1].speed, 0.5);
  EXPECT_DOUBLE_EQ(fan.fronts[0].left, 1.0);
  EXPECT_DOUBLE_EQ(fan.fronts[0].right, 0.5);
  EXPECT_DOUBLE_EQ(fan.fronts[1].right, 0.0);
}

TEST(SolveClassic, CollinearSegmentsMerge) {
  const PiecewiseLinearFlux q(Eigen::Vector4d(0.0, 0.25, 0.5, 1.0), Eigen::Vector4d(0.0, 0.25, 0.5, 0.0));
  const auto fan = solve_classic(q, 0.5, 0.0);
  ASSERT_EQ(fan.fronts.size(), 1u);
  EXPECT_DOUBLE_EQ(fan.fronts[0].speed, 1.0);
}

TEST(SolveClassic, RandomFluxesValidAndEntropic) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + trial % 15;
    Eigen::VectorXd b(k + 1), v(k + 1);
    for (int i = 0; i <= k; ++i) {
      b[i] = static_cast<double>(i) / k;
      v[i] = U(rng) - 0.5;
    }
    const PiecewiseLinearFlux q(b, v);
    const double ul = U(rng), ur = trial % 5 == 0 ? b[trial % (k + 1)] : U(rng);
    const auto fan = solve_classic(q, ul, ur);
    expect_valid_fan(q, fan, ul, ur);
    expect_entropy(q, fan);
  }
}

// solve_interface ---------------------------------------------------------------

TEST(SolveInterface, EqualFluxesHaveNoInterfaceJump) {
  const auto q = traffic_pl(1.0, 0.125);
  for (auto [ul, ur] : {std::pair{0.2, 0.7}, std::pair{0.9, 0.1}, std::pair{0.5, 0.5}}) {
    const auto s = solve_interface(q, q, ul, ur);
    EXPECT_EQ(s.trace.u_minus, s.trace.u_plus);
    // Left and right fans together make the classical fan.
    auto joined = s.left.fronts;
    joined.insert(joined.end(), s.right.fronts.begin(), s.right.fronts.end());
    const auto classic = solve_classic(q, ul, ur);
    std::vector<WaveFront> moving;
    for (const auto& w : classic.fronts)
      if (w.speed != 0.0) moving.push_back(w);
    ASSERT_EQ(joined.size(), moving.size());
    for (std::size_t i = 0; i < joined.size(); ++i) {
      EXPECT_DOUBLE_EQ(joined[i].speed, moving[i].speed);
      EXPECT_DOUBLE_EQ(joined[i].left, moving[i].left);
      EXPECT_DOUBLE_EQ(joined[i].right, moving[i].right);
    }
  }
}

TEST(SolveInterface, TrafficFreeFlowIntoFasterRoad) {
  const double exact = (1.0 - std::sqrt(0.5)) / 2.0;
  double previous = 1.0;
  for (int e = 3; e <= 10; ++e) {
    const double delta = std::ldexp(1.0, -e);
    const auto g = traffic_pl(1.0, delta), f = traffic_pl(2.0, delta);
    const auto s = solve_interface(g, f, 0.5, 0.5);
    EXPECT_DOUBLE_EQ(s.trace.flux_level, 0.25);
    EXPECT_DOUBLE_EQ(s.trace.u_minus, 0.5);
    EXPECT_NEAR(f(s.trace.u_plus), 0.25, kFluxLevelTolerance);
    EXPECT_LT(s.trace.u_plus, 0.5);
    EXPECT_TRUE(s.left.empty());
    EXPECT_TRUE(gamma_check(g, f, s.trace.u_minus, s.trace.u_plus).pass);
    const double err = std::abs(s.trace.u_plus - exact);
    EXPECT_LE(err, previous + 1e-15);
    // The interpolant misses the root by at most sup_gap / slope, well below delta.
    EXPECT_LT(err, delta);
    previous = err;
    const auto [gm, gp] = godunov_traces(g, f, 0.5, 0.5, std::ldexp(1.0, -8));
    EXPECT_NEAR(gm, s.trace.u_minus, 1e-12);
    EXPECT_NEAR(gp, s.trace.u_plus, 1e-12);
  }
}

TEST(SolveInterface, TrafficCongestionFromSlowerRoad) {
  const double exact = (1.0 + std::sqrt(0.5)) / 2.0;
  for (int e = 3; e <= 10; ++e) {
    const double delta = std::ldexp(1.0, -e);
    const auto g = traffic_pl(2.0, delta), f = traffic_pl(1.0, delta);
    const auto s = solve_interface(g, f, 0.5, 0.5);
    EXPECT_DOUBLE_EQ(s.trace.flux_level, 0.25);
    EXPECT_DOUBLE_EQ(s.trace.u_plus, 0.5);
    EXPECT_GT(s.trace.u_minus, 0.5);
    EXPECT_LT(std::abs(s.trace.u_minus - exact), delta);
    ASSERT_FALSE(s.left.empty());
    EXPECT_LT(s.left.fronts.front().speed, 0.0);
    EXPECT_TRUE(s.right.empty());
    const auto [gm, gp] = godunov_traces(g, f, 0.5, 0.5, std::ldexp(1.0, -8));
    EXPECT_NEAR(gm, s.trace.u_minus, 1e-12);
    EXPECT_NEAR(gp, s.trace.u_plus, 1e-12);
  }
}

TEST(SolveInterface, AgreesWithGodunovOnRandomData) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double coeffs[] = {0.0, 0.5, 0.5, -1.0};
  const auto g = interpolate(polynomial_flux(coeffs, {0.0, 1.0}), BreakpointOptions{0.125});
  const auto f = interpolate(traffic_flux(1.0), BreakpointOptions{0.125});
  for (int trial = 0; trial < 20; ++trial) {
    const double ul = std::round(U(rng) * 8) / 8, ur = std::round(U(rng) * 8) / 8;
    const auto s = solve_interface(g, f, ul, ur);
    for (const auto& w : s.left.fronts) EXPECT_LT(w.speed, 0.0);
    for (const auto& w : s.right.fronts) EXPECT_GT(w.speed, 0.0);
    EXPECT_NEAR(g(s.trace.u_minus), f(s.trace.u_plus), kFluxLevelTolerance);
    // Coarse-to-fine Godunov: traces approach the front tracking pair.
    const auto [gm, gp] = godunov_traces(g, f, ul, ur, std::ldexp(1.0, -9));
    EXPECT_NEAR(gm, s.trace.u_minus, 1e-6) << ul << " " << ur;
    EXPECT_NEAR(gp, s.trace.u_plus, 1e-6) << ul << " " << ur;
  }
}

TEST(SolveInterface, RandomPairsSatisfyAllConditions) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + trial % 10;
    Eigen::VectorXd b(k + 1), vg(k + 1), vf(k + 1);
    for (int i = 0; i <= k; ++i) {
      b[i] = static_cast<double>(i) / k;
      vg[i] = (i == 0 || i == k) ? 0.0 : U(rng);
      vf[i] = (i == 0 || i == k) ? 0.0 : U(rng);
    }
    const PiecewiseLinearFlux g(b, vg), f(b, vf);
    const double ul = U(rng), ur = U(rng);
    const auto s = solve_interface(g, f, ul, ur);
    EXPECT_NEAR(g(s.trace.u_minus), s.trace.flux_level, kFluxLevelTolerance);
    EXPECT_NEAR(f(s.trace.u_plus), s.trace.flux_level, kFluxLevelTolerance);
    EXPECT_TRUE(gamma_check(g, f, s.trace.u_minus, s.trace.u_plus).pass);
    const auto left = solve_classic(g, ul, s.trace.u_minus);
    const auto right = solve_classic(f, s.trace.u_plus, ur);
    for (const auto& w : left.fronts) EXPECT_LE(w.speed, 0.0);
    for (const auto& w : right.fronts) EXPECT_GE(w.speed, 0.0);
    for (const auto& w : s.left.fronts) EXPECT_LT(w.speed, 0.0);
    for (const auto& w : s.right.fronts) EXPECT_GT(w.speed, 0.0);
    if (!s.left.empty()) EXPECT_EQ(s.left.fronts.front().left, ul);
    if (!s.right.empty()) EXPECT_EQ(s.right.fronts.back().right, ur);
    EXPECT_LE(rankine_hugoniot_defect(g, s.left), kRankineHugoniotTolerance);
    EXPECT_LE(rankine_hugoniot_defect(f, s.right), kRankineHugoniotTolerance);
    // The returned pair has the minimal jump among the admissible ones.
    for (const auto& p : s.admissible)
      EXPECT_LE(std::abs(s.trace.u_plus - s.trace.u_minus), std::abs(p.u_plus - p.u_minus) + 1e-15);
  }
}

TEST(SolveInterface, IncreasingFluxesSendEverythingRight) {
  const auto g = interpolate(exponential_flux(1.0, 2.0), BreakpointOptions{0.1});
  const auto f = interpolate(exponential_flux(1.0, 1.0), BreakpointOptions{0.1});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double ul = U(rng), ur = U(rng);
    const auto s = solve_interface(g, f, ul, ur);
    EXPECT_TRUE(s.left.empty());
    EXPECT_EQ(s.trace.u_minus, ul);
    EXPECT_NEAR(f(s.trace.u_plus), g(ul), kFluxLevelTolerance);
  }
}

// gamma_check ---------------------------------------------------------------------

TEST(GammaCheck, DegenerateIntervalPasses) {
  const auto q = traffic_pl(1.0, 0.25);
  const auto r = gamma_check(q, q, 0.25, 0.25);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.witness, 0.25);
}

TEST(GammaCheck, TrafficPairs) {
  const auto g1 = traffic_pl(1.0, 0.0625), f2 = traffic_pl(2.0, 0.0625);
  const auto s12 = solve_interface(g1, f2, 0.5, 0.5);
  EXPECT_TRUE(gamma_check(g1, f2, s12.trace.u_minus, s12.trace.u_plus).pass);
  const auto s21 = solve_interface(f2, g1, 0.5, 0.5);
  EXPECT_TRUE(gamma_check(f2, g1, s21.trace.u_minus, s21.trace.u_plus).pass);
  // The congested state of the other configuration, on either side.
  const double congested = s21.trace.u_minus;
  EXPECT_FALSE(gamma_check(g1, f2, congested, 0.5).pass);
  EXPECT_FALSE(gamma_oracle(g1, f2, congested, 0.5));
  // (0.5, congested) is a Gamma-admissible stationary jump with witness 0.5,
  // but not the pair selected for data (0.5, 0.5).
  const auto r = gamma_check(g1, f2, 0.5, congested);
  EXPECT_EQ(r.pass, gamma_oracle(g1, f2, 0.5, congested));
  EXPECT_TRUE(r.pass);
  EXPECT_DOUBLE_EQ(r.witness, 0.5);
  EXPECT_NE(s12.trace.u_plus, congested);
}

TEST(GammaCheck, AgreesWithLiteralDefinition) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int passes = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int k = 2 + trial % 6;
    Eigen::VectorXd b(k + 1), vg(k + 1), vf(k + 1);
    for (int i = 0; i <= k; ++i) {
      b[i] = static_cast<double>(i) / k;
      vg[i] = std::round(U(rng) * 4) / 4;
      vf[i] = std::round(U(rng) * 4) / 4;
    }
    const PiecewiseLinearFlux g(b, vg), f(b, vf);
    // Pairs on a common flux level so the sign conditions decide.
    const double um = b[static_cast<Eigen::Index>(U(rng) * (k + 1)) % (k + 1)];
    const double level = g(um);
    std::vector<double> ups;
    for (Eigen::Index i = 0; i < f.size(); ++i)
      if (std::abs(f.values()[i] - level) < 1e-15) ups.push_back(b[i]);
    for (double up : ups) {
      const bool oracle = gamma_oracle(g, f, um, up);
      EXPECT_EQ(gamma_check(g, f, um, up).pass, oracle) << um << " " << up;
      passes += oracle;
    }
  }
  EXPECT_GT(passes, 0);
}

TEST(GammaCheck, WitnessBetweenBreakpoints) {
  // f <= 0.75 on [0, 5/21] and g <= 0.75 on [5/28, 3/7]: the witness set has no breakpoint.
  Eigen::VectorXd b(8), vg(8), vf(8);
  for (int i = 0; i < 8; ++i) b[i] = i / 7.0;
  vg << 0.25, 1, 0, 0.75, 0.75, 0.5, 0.25, 0.75;
  vf << 0.75, 0.25, 1, 0.5, 0.5, 0.25, 0.25, 0.5;
  const PiecewiseLinearFlux g(b, vg), f(b, vf);
  const auto r = gamma_check(g, f, 3.0 / 7.0, 0.0);
  ASSERT_TRUE(r.pass);
  EXPECT_GE(r.witness, 5.0 / 28.0 - 1e-12);
  EXPECT_LE(r.witness, 5.0 / 21.0 + 1e-12);
  EXPECT_TRUE(gamma_oracle(g, f, 3.0 / 7.0, 0.0));
}

TEST(GammaCheck, FluxMismatchFails) {
  const auto g = traffic_pl(1.0, 0.25), f = traffic_pl(2.0, 0.25);
  EXPECT_FALSE(gamma_check(g, f, 0.25, 0.25).pass);
}

TEST(GammaCheck, WitnessSatisfiesSignConditions) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double coeffs[] = {0.0, 0.5, 0.5, -1.0};
  const auto g = interpolate(polynomial_flux(coeffs, {0.0, 1.0}), BreakpointOptions{0.1});
  const auto f = interpolate(traffic_flux(1.0), BreakpointOptions{0.1});
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = solve_interface(g, f, U(rng), U(rng));
    const auto r = gamma_check(g, f, s.trace.u_minus, s.trace.u_plus);
    ASSERT_TRUE(r.pass);
    const double um = s.trace.u_minus, up = s.trace.u_plus, ug = r.witness;
    EXPECT_GE(ug, std::min(um, up) - 1e-15);
    EXPECT_LE(ug, std::max(um, up) + 1e-15);
    // (u_+ - u_G)(f(z) - f(u_+)) >= 0 on co(u_+, u_G); (u_- - u_G)(g(z) - g(u_-)) <= 0 on co(u_-, u_G).
    for (int i = 0; i <= 400; ++i) {
      const double zf = up + (ug - up) * i / 400.0;
      const double zg = um + (ug - um) * i / 400.0;
      EXPECT_GE((up - ug) * (f(zf) - f(up)), -1e-10);
      EXPECT_LE((um - ug) * (g(zg) - g(um)), 1e-10);
    }
  }
}

TEST(Describe, CsvRows) {
  const auto q = interpolate(traffic_flux(1.0), BreakpointOptions{0.5});
  const auto text = describe(solve_classic(q, 1.0, 0.0));
  EXPECT_NE(text.find("speed,left,right"), std::string::npos);
  EXPECT_NE(text.find("-0.5"), std::string::npos);
}
