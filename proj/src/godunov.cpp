#include "ftrack/godunov.hpp"

#include "ftrack/discretize.hpp"
#include "ftrack/errors.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace ftrack {

namespace {

template <class Q>
void step_impl(GodunovGrid& grid, const Q& g, const Q& f) {
  const double max_l = std::max(g.lipschitz(), f.lipschitz());
  if (grid.lambda * max_l > 0.5 * (1.0 + 1e-14))
    throw ConfigurationError("CFL condition violated: lambda max(L_f, L_g) = " +
                             std::to_string(grid.lambda * max_l) + " > 1/2");
  const Eigen::Index n = grid.cells.size();
  // h[k] is the flux through the face x_{first + k - 1/2}, k = 0 .. n.
  Eigen::VectorXd h(n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) {
    const long j = grid.first + static_cast<long>(k) - 1;  // face j + 1/2
    const double u = grid.value(j);
    const double v = grid.value(j + 1);
    h[k] = j <= -1 ? godunov_flux(g, v, u) : godunov_flux(f, v, u);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    grid.cells[k] -= grid.lambda * (h[k + 1] - h[k]);
    grid.hat[k] -= grid.dt * h[k + 1];
  }
  grid.ghost_hat -= grid.dt * h[0];
  ++grid.time_index;
}

template <class Q>
GodunovGrid run_impl(const Q& g, const Q& f, const StepFunction& u0, double support_radius, double horizon,
                     double dx, const GodunovOptions& options) {
  if (!(dx > 0.0)) throw ConfigurationError("dx must be positive");
  const double max_l = std::max(g.lipschitz(), f.lipschitz());
  double lambda = options.lambda;
  if (lambda <= 0.0) {
    if (!(max_l > 0.0)) throw ConfigurationError("fluxes with zero Lipschitz constant need an explicit lambda");
    lambda = 1.0 / (2.0 * max_l);
  }
  if (lambda * max_l > 0.5 * (1.0 + 1e-14))
    throw ConfigurationError("CFL condition violated: lambda max(L_f, L_g) = " + std::to_string(lambda * max_l) +
                             " > 1/2");
  const double dt = lambda * dx;
  const long steps = step_count(horizon, dt);
  GodunovGrid grid = make_grid(u0, dx, dt, steps, support_radius);
  for (long n = 0; n < steps; ++n) {
    step_impl(grid, g, f);
    if (options.observer) options.observer(grid);
  }
  return grid;
}

}  // namespace

double GodunovGrid::value(long j) const {
  if (j < first) return u_left;
  if (j > last()) return u_right;
  return cells[j - first];
}

long step_count(double horizon, double dt) {
  if (!(dt > 0.0)) throw ConfigurationError("dt must be positive");
  if (horizon <= 0.0) return 0;
  return static_cast<long>(std::ceil(horizon / dt * (1.0 - 1e-14)));
}

GodunovGrid make_grid(const StepFunction& u0, double dx, double dt, long steps, double support_radius) {
  if (!(dx > 0.0) || !(dt > 0.0)) throw ConfigurationError("mesh parameters must be positive");
  GodunovGrid grid;
  grid.dx = dx;
  grid.dt = dt;
  grid.lambda = dt / dx;
  const long half = static_cast<long>(std::ceil(support_radius / dx)) + steps + 2;
  grid.first = -half;
  grid.cells = project_cells(u0, dx, -half, half);
  grid.u_left = u0.left_value();
  grid.u_right = u0.right_value();
  grid.hat.resize(grid.cells.size());
  double acc = 0.0;
  for (Eigen::Index k = 0; k < grid.cells.size(); ++k) {
    acc += dx * (grid.cells[k] - grid.u_left);
    grid.hat[k] = acc;
  }
  return grid;
}

void step(GodunovGrid& grid, const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f) { step_impl(grid, g, f); }
void step(GodunovGrid& grid, const SmoothFlux& g, const SmoothFlux& f) { step_impl(grid, g, f); }

GodunovGrid run_godunov(const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f, const StepFunction& u0,
                        double support_radius, double horizon, double dx, const GodunovOptions& options) {
  return run_impl(g, f, u0, support_radius, horizon, dx, options);
}

GodunovGrid run_godunov(const SmoothFlux& g, const SmoothFlux& f, const StepFunction& u0, double support_radius,
                        double horizon, double dx, const GodunovOptions& options) {
  return run_impl(g, f, u0, support_radius, horizon, dx, options);
}

StepFunction profile(const GodunovGrid& grid) {
  const Eigen::Index n = grid.cells.size();
  std::vector<double> positions(static_cast<std::size_t>(n + 1));
  std::vector<double> values(static_cast<std::size_t>(n + 2));
  values[0] = grid.u_left;
  for (Eigen::Index k = 0; k <= n; ++k)
    positions[static_cast<std::size_t>(k)] = (static_cast<double>(grid.first + k) - 0.5) * grid.dx;
  for (Eigen::Index k = 0; k < n; ++k) values[static_cast<std::size_t>(k + 1)] = grid.cells[k];
  values[static_cast<std::size_t>(n + 1)] = grid.u_right;
  return StepFunction::from_breaks(positions, values);
}

Eigen::VectorXd hat_values(const GodunovGrid& grid) {
  return grid.hat.array() - grid.ghost_hat;
}

PiecewiseAffine hat_profile(const GodunovGrid& grid) {
  const Eigen::Index n = grid.cells.size();
  std::vector<double> knots(static_cast<std::size_t>(n + 1));
  std::vector<double> values(static_cast<std::size_t>(n + 1));
  knots[0] = (static_cast<double>(grid.first) - 0.5) * grid.dx;
  values[0] = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    knots[static_cast<std::size_t>(k + 1)] = (static_cast<double>(grid.first + k) + 0.5) * grid.dx;
    values[static_cast<std::size_t>(k + 1)] = grid.hat[k] - grid.ghost_hat;
  }
  return PiecewiseAffine(std::move(knots), std::move(values), grid.u_right - grid.u_left);
}

void write_snapshot(std::ostream& out, const GodunovGrid& grid) {
  out << "x_center,value\n" << std::setprecision(17);
  for (Eigen::Index k = 0; k < grid.cells.size(); ++k)
    out << grid.center(grid.first + static_cast<long>(k)) << ',' << grid.cells[k] << '\n';
}

}  // namespace ftrack
