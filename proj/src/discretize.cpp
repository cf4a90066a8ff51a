#include "ftrack/discretize.hpp"

#include "ftrack/errors.hpp"
#include "ftrack/problem.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace ftrack {

namespace {

void check_support(const StepFunction& u0, double support_radius) {
  if (!(support_radius > 0.0)) throw InvalidInput("support radius X must be positive");
  for (double x : u0.jumps())
    if (x <= -support_radius || x > support_radius)
      throw InvalidInput("initial data must be constant outside [-X, X]");
}

}  // namespace

BVPartition bv_partition(const StepFunction& u0, double support_radius, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("partition mesh must be positive");
  check_support(u0, support_radius);
  const double X = support_radius;
  const auto& jumps = u0.jumps();
  const auto& values = u0.values();
  std::vector<double> strength(jumps.size());
  double total = 0.0;
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    strength[i] = std::abs(values[i + 1] - values[i]);
    total += strength[i];
  }
  if (!std::isfinite(total)) throw InvalidInput("initial data must have finite total variation");

  BVPartition out;
  out.delta = delta;

  // Variation partition: xi_mu is the first jump at which the variation
  // accumulated since xi_{mu-1} (exclusive) reaches delta.
  out.variation_points.push_back(-X);
  double acc = 0.0;
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    acc += strength[i];
    if (acc >= delta) {
      if (jumps[i] >= X) break;
      out.variation_points.push_back(jumps[i]);
      acc = 0.0;
    }
  }
  out.variation_points.push_back(X);

  // Uniform partition, last cell possibly shorter.
  std::vector<std::pair<double, int>> pts;
  const auto m = static_cast<long>(std::ceil(2.0 * X / delta - 1e-12));
  for (long i = 0; i < m; ++i) pts.emplace_back(-X + static_cast<double>(i) * delta, 1);
  pts.emplace_back(X, 0);
  for (double xi : out.variation_points) pts.emplace_back(xi, 0);
  std::sort(pts.begin(), pts.end());

  // Merge near-duplicates, preferring variation points (exact jump locations).
  const double tol = 1e-12 * X;
  for (const auto& p : pts) {
    if (!out.points.empty() && p.first - out.points.back() <= tol) {
      if (p.second == 0 && out.points.size() > 1) out.points.back() = p.first;
      continue;
    }
    out.points.push_back(p.first);
  }
  out.points.front() = -X;
  if (out.points.back() != X) {
    if (X - out.points.back() <= tol)
      out.points.back() = X;
    else
      out.points.push_back(X);
  }

  out.cell_variation.assign(out.points.size() - 1, 0.0);
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const auto cell = static_cast<std::size_t>(
        std::upper_bound(out.points.begin(), out.points.end(), jumps[i]) - out.points.begin());
    // Jumps sitting on a partition point do not count as interior variation.
    if (cell == 0 || cell >= out.points.size()) continue;
    if (out.points[cell - 1] == jumps[i]) continue;
    out.cell_variation[cell - 1] += strength[i];
  }
  return out;
}

StepFunction project_restricted(const StepFunction& u0, const BVPartition& partition, double jump_tol) {
  const auto& z = partition.points;
  if (z.size() < 2) throw InvalidInput("partition needs at least two points");
  std::vector<double> values;
  values.reserve(z.size() + 1);
  values.push_back(u0.left_value());
  for (std::size_t i = 1; i < z.size(); ++i) values.push_back(u0.integral(z[i - 1], z[i]) / (z[i] - z[i - 1]));
  values.push_back(u0.right_value());
  StepFunction out = StepFunction::from_breaks(z, values);
  return jump_tol > 0.0 ? drop_small_jumps(out, jump_tol) : out;
}

StepFunction project_uniform(const StepFunction& u0, double support_radius, double delta, double jump_tol) {
  check_support(u0, support_radius);
  const double X = support_radius;
  const auto m = static_cast<long>(std::ceil(2.0 * X / delta - 1e-12));
  std::vector<double> z;
  for (long i = 0; i < m; ++i) z.push_back(-X + static_cast<double>(i) * delta);
  z.push_back(X);
  std::vector<double> values{u0.left_value()};
  for (std::size_t i = 1; i < z.size(); ++i) values.push_back(u0(0.5 * (z[i - 1] + z[i])));
  values.push_back(u0.right_value());
  StepFunction out = StepFunction::from_breaks(z, values);
  return jump_tol > 0.0 ? drop_small_jumps(out, jump_tol) : out;
}

Eigen::VectorXd project_cells(const StepFunction& u0, double dx, long first, long last) {
  if (!(dx > 0.0) || last < first) throw InvalidInput("invalid cell window");
  Eigen::VectorXd cells(last - first + 1);
  for (long j = first; j <= last; ++j) {
    const double xc = static_cast<double>(j) * dx;
    cells[j - first] = u0.integral(xc - 0.5 * dx, xc + 0.5 * dx) / dx;
  }
  return cells;
}

StepFunction sample_staircase(const std::function<double(double)>& u0, double support_radius, double u_left,
                              double u_right, int samples) {
  if (samples < 1 || !(support_radius > 0.0)) throw InvalidInput("invalid sampling request");
  const double h = 2.0 * support_radius / samples;
  std::vector<double> positions;
  std::vector<double> values{u_left};
  for (int i = 0; i <= samples; ++i) positions.push_back(-support_radius + i * h);
  positions.back() = support_radius;
  for (int i = 0; i < samples; ++i) values.push_back(u0(-support_radius + (i + 0.5) * h));
  values.push_back(u_right);
  return StepFunction::from_breaks(positions, values);
}

double TwoFluxProblem::max_lipschitz() const { return std::max(left_flux.lipschitz(), right_flux.lipschitz()); }

void TwoFluxProblem::validate() const {
  const StateInterval a = left_flux.domain();
  const StateInterval b = right_flux.domain();
  if (a.lower != b.lower || a.upper != b.upper) throw InvalidInput("left and right fluxes must share the state interval");
  const double scale = std::max({1.0, left_flux.sup_norm(), right_flux.sup_norm()});
  if (std::abs(left_flux(a.lower) - right_flux(a.lower)) > 1e-12 * scale ||
      std::abs(left_flux(a.upper) - right_flux(a.upper)) > 1e-12 * scale)
    throw InvalidInput("fluxes must agree at both ends of the state interval");
  if (!(horizon >= 0.0)) throw InvalidInput("horizon T must be nonnegative");
  check_support(initial, support_radius);
  const double slack = 1e-12 * a.width();
  for (double v : initial.values())
    if (!a.contains(v, slack)) throw DomainError("initial data leaves the state interval");
}

DiscreteFluxes discretize_fluxes(const TwoFluxProblem& problem, const BreakpointOptions& options) {
  std::vector<double> extra = options.extra;
  if (options.include_critical_points) {
    for (const SmoothFlux* q : {&problem.left_flux, &problem.right_flux})
      if (q->critical_points()) extra.insert(extra.end(), q->critical_points()->begin(), q->critical_points()->end());
  }
  const auto bp = uniform_breakpoints(problem.states(), options.delta, extra);
  PiecewiseLinearFlux g = interpolate(problem.left_flux, bp);
  PiecewiseLinearFlux f = problem.same_flux ? g : interpolate(problem.right_flux, bp);
  return DiscreteFluxes{std::move(g), std::move(f), problem.states(), problem.same_flux};
}

}  // namespace ftrack
