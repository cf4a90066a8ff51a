#pragma once

#include "ftrack/flux.hpp"
#include "ftrack/step_function.hpp"

#include <algorithm>
#include <string>

namespace ftrack {

/// Scalar conservation law with flux g for x < 0 and f for x > 0.
struct TwoFluxProblem {
  std::string name;
  SmoothFlux left_flux;   ///< g
  SmoothFlux right_flux;  ///< f
  StepFunction initial;   ///< u_0, constant outside [-X, X]
  double support_radius = 1.0;  ///< X
  double horizon = 1.0;         ///< T
  /// g and f are the same function; no interface is tracked.
  bool same_flux = false;

  StateInterval states() const { return left_flux.domain(); }
  double u_left() const { return initial.left_value(); }
  double u_right() const { return initial.right_value(); }
  double max_lipschitz() const;

  /// Checks matching domains and endpoint values, data range and far-field support.
  void validate() const;
};

/// Piecewise-linear fluxes of a front tracking problem.
struct DiscreteFluxes {
  PiecewiseLinearFlux left;   ///< g^delta
  PiecewiseLinearFlux right;  ///< f^delta
  StateInterval states;
  bool same_flux = false;

  double max_lipschitz() const { return std::max(left.lipschitz(), right.lipschitz()); }
};

/// Interpolates both fluxes on a shared breakpoint set.
DiscreteFluxes discretize_fluxes(const TwoFluxProblem& problem, const BreakpointOptions& options);

}  // namespace ftrack
