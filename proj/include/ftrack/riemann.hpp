#pragma once

#include "ftrack/flux.hpp"

#include <string>
#include <vector>

namespace ftrack {

/// One discontinuity of a Riemann fan.
struct WaveFront {
  double speed = 0.0;
  double left = 0.0;
  double right = 0.0;
};

/// Self-similar Riemann solution: fronts ordered by strictly increasing speed,
/// with chained states.
struct WaveFan {
  std::vector<WaveFront> fronts;
  double x = 0.0;
  double t = 0.0;

  bool empty() const { return fronts.empty(); }
};

/// States adjacent to the interface and the common interface flux.
struct TracePair {
  double u_minus = 0.0;
  double u_plus = 0.0;
  double flux_level = 0.0;
};

struct GammaResult {
  bool pass = false;
  /// A valid u_Gamma when `pass` is set.
  double witness = 0.0;
};

struct InterfaceSolution {
  WaveFan left;   ///< speeds < 0
  TracePair trace;
  WaveFan right;  ///< speeds > 0
  /// More than one distinct admissible pair was found; the minimal jump one was kept.
  bool tie_break = false;
  std::vector<TracePair> admissible;
};

/// Rankine-Hugoniot relative tolerance for fronts.
inline constexpr double kRankineHugoniotTolerance = 1e-12;
/// Absolute tolerance on g(u_-) = f(u_+).
inline constexpr double kFluxLevelTolerance = 1e-10;

/// Entropy solution of the single-flux Riemann problem (ul, ur) under q.
WaveFan solve_classic(const PiecewiseLinearFlux& q, double ul, double ur);

/// Vanishing viscosity solution of the Riemann problem at x = 0 with g on
/// the left and f on the right.
InterfaceSolution solve_interface(const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f, double ul, double ur);

/// Gamma condition for the interface pair (u_minus, u_plus).
GammaResult gamma_check(const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f, double u_minus, double u_plus);

/// max relative Rankine-Hugoniot defect over a fan.
double rankine_hugoniot_defect(const PiecewiseLinearFlux& q, const WaveFan& fan);

std::string describe(const WaveFan& fan);

}  // namespace ftrack
