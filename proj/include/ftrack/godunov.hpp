#pragma once

#include "ftrack/flux.hpp"
#include "ftrack/step_function.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>

namespace ftrack {

/// Cell averages U_j^n on I_j = (x_j - dx/2, x_j + dx/2], x_j = j dx, for
/// j = first .. first + cells.size() - 1. Cells outside the window hold u_L
/// (left) and u_R (right).
struct GodunovGrid {
  double dx = 0.0;
  double dt = 0.0;
  double lambda = 0.0;
  long first = 0;
  Eigen::VectorXd cells;
  /// Discrete indefinite integrals, advanced by hat_j -= dt h_{j+1/2}.
  Eigen::VectorXd hat;
  /// The same recursion for the ghost index first - 1.
  double ghost_hat = 0.0;
  long time_index = 0;
  double u_left = 0.0;
  double u_right = 0.0;

  long last() const { return first + static_cast<long>(cells.size()) - 1; }
  double time() const { return static_cast<double>(time_index) * dt; }
  double center(long j) const { return static_cast<double>(j) * dx; }
  /// U_j^n for any j, far fields included.
  double value(long j) const;
};

/// Number of steps N with N dt in [T, T + dt).
long step_count(double horizon, double dt);

/// Initial grid: cell averages of u0 on a window wide enough for `steps`
/// steps of a scheme that moves information at most one cell per step.
GodunovGrid make_grid(const StepFunction& u0, double dx, double dt, long steps, double support_radius);

/// One step of the scheme with g on faces x < 0 and f on faces x > 0.
/// Throws ConfigurationError when lambda max(L_f, L_g) > 1/2.
void step(GodunovGrid& grid, const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f);
void step(GodunovGrid& grid, const SmoothFlux& g, const SmoothFlux& f);

struct GodunovOptions {
  /// dt / dx; defaults to 1 / (2 max(L_f, L_g)).
  double lambda = 0.0;
  /// Called after every step.
  std::function<void(const GodunovGrid&)> observer;
};

GodunovGrid run_godunov(const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f, const StepFunction& u0,
                        double support_radius, double horizon, double dx, const GodunovOptions& options = {});
GodunovGrid run_godunov(const SmoothFlux& g, const SmoothFlux& f, const StepFunction& u0, double support_radius,
                        double horizon, double dx, const GodunovOptions& options = {});

/// Piecewise-constant extension of the current row.
StepFunction profile(const GodunovGrid& grid);
/// x -> integral_{-inf}^x (u - u_L) of the extended row, affine in each cell.
PiecewiseAffine hat_profile(const GodunovGrid& grid);
/// Grid values of the discrete indefinite integral, shifted to vanish far left.
Eigen::VectorXd hat_values(const GodunovGrid& grid);

/// Writes "x_center,value" rows.
void write_snapshot(std::ostream& out, const GodunovGrid& grid);

}  // namespace ftrack
