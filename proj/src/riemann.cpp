#include "ftrack/riemann.hpp"

#include "ftrack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>

namespace ftrack {

namespace {

double value_tolerance(const PiecewiseLinearFlux& q) { return 1e-13 * std::max(1.0, q.sup_norm()); }

// Breakpoints strictly between a and b, in walking order from a to b.
std::vector<double> interior_breakpoints(const PiecewiseLinearFlux& q, double a, double b) {
  const auto& bp = q.breakpoints();
  const double* begin = bp.data();
  const double* end = begin + bp.size();
  std::vector<double> out;
  if (a < b) {
    for (const double* it = std::upper_bound(begin, end, a); it != end && *it < b; ++it) out.push_back(*it);
  } else {
    const double* it = std::lower_bound(begin, end, a);
    while (it != begin) {
      --it;
      if (*it <= b) break;
      out.push_back(*it);
    }
  }
  return out;
}

// Farthest p between start and target with s * (q(z) - q(start)) <= 0 for
// every z between start and p.
double reach(const PiecewiseLinearFlux& q, double start, double target, double s) {
  if (start == target) return start;
  const double q0 = q(start);
  const double tol = value_tolerance(q);
  double prev = start;
  double hprev = 0.0;
  auto points = interior_breakpoints(q, start, target);
  points.push_back(target);
  for (double z : points) {
    const double h = s * (q(z) - q0);
    if (h <= tol) {
      prev = z;
      hprev = h;
      continue;
    }
    if (hprev >= 0.0) return prev;
    return prev + (-hprev) / (h - hprev) * (z - prev);
  }
  return target;
}

// First state w reached from `start` walking in direction `dir` with
// q(w) >= c (up) or q(w) <= c (down).
std::optional<double> first_hit(const PiecewiseLinearFlux& q, double start, int dir, bool up, double c) {
  const double tol = value_tolerance(q);
  const double v0 = q(start);
  if (std::abs(v0 - c) <= tol) return start;
  const double edge = dir > 0 ? q.domain().upper : q.domain().lower;
  if (start == edge) return std::nullopt;
  double prev = start;
  double vprev = v0;
  auto points = interior_breakpoints(q, start, edge);
  points.push_back(edge);
  for (double z : points) {
    const double v = q(z);
    const bool hit = up ? v >= c - tol : v <= c + tol;
    if (hit) {
      if (std::abs(v - c) <= tol) return z;
      const double w = (c - vprev) / (v - vprev);
      return prev + std::clamp(w, 0.0, 1.0) * (z - prev);
    }
    prev = z;
    vprev = v;
  }
  return std::nullopt;
}

// Left trace at level c: g(u_-) = c and the left wave has negative speeds.
std::optional<double> left_state(const PiecewiseLinearFlux& g, double ul, double c) {
  const double v = g(ul);
  const double tol = value_tolerance(g);
  if (std::abs(v - c) <= tol) return ul;
  return c < v ? first_hit(g, ul, +1, false, c) : first_hit(g, ul, -1, true, c);
}

// Right trace at level c: f(u_+) = c and the right wave has positive speeds.
std::optional<double> right_state(const PiecewiseLinearFlux& f, double ur, double c) {
  const double v = f(ur);
  const double tol = value_tolerance(f);
  if (std::abs(v - c) <= tol) return ur;
  return c < v ? first_hit(f, ur, -1, false, c) : first_hit(f, ur, +1, true, c);
}

std::vector<double> canonical_levels(const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f, double ul,
                                     double ur) {
  const StateInterval dom = g.domain();
  std::vector<double> levels{g(ul),
                             f(ur),
                             godunov_flux(g, ur, ul),
                             godunov_flux(f, ur, ul),
                             g.max_on(dom.lower, ul),
                             g.min_on(ul, dom.upper),
                             f.min_on(dom.lower, ur),
                             f.max_on(ur, dom.upper)};
  for (const Crossing& c : find_crossings(f, g).crossings) levels.push_back(f(c.location));
  return levels;
}

std::vector<double> all_levels(const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f) {
  std::vector<double> levels(g.values().data(), g.values().data() + g.size());
  levels.insert(levels.end(), f.values().data(), f.values().data() + f.size());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

void collect(const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f, double ul, double ur,
             const std::vector<double>& levels, std::vector<TracePair>& tried, std::vector<TracePair>& passing) {
  for (double c : levels) {
    const auto um = left_state(g, ul, c);
    const auto up = right_state(f, ur, c);
    if (!um || !up) continue;
    const TracePair pair{*um, *up, c};
    const bool seen = std::any_of(tried.begin(), tried.end(), [&](const TracePair& p) {
      return p.u_minus == pair.u_minus && p.u_plus == pair.u_plus;
    });
    if (seen) continue;
    tried.push_back(pair);
    if (gamma_check(g, f, pair.u_minus, pair.u_plus).pass) passing.push_back(pair);
  }
}

}  // namespace

WaveFan solve_classic(const PiecewiseLinearFlux& q, double ul, double ur) {
  WaveFan fan;
  if (ul == ur) return fan;
  const bool rising = ul < ur;
  const PiecewiseLinearFlux env = rising ? lower_convex_envelope(q, ul, ur) : upper_concave_envelope(q, ur, ul);
  const auto& x = env.breakpoints();
  const auto& y = env.values();
  const Eigen::Index n = x.size();
  if (rising) {
    for (Eigen::Index k = 0; k + 1 < n; ++k)
      fan.fronts.push_back({(y[k + 1] - y[k]) / (x[k + 1] - x[k]), x[k], x[k + 1]});
  } else {
    for (Eigen::Index k = n - 1; k > 0; --k)
      fan.fronts.push_back({(y[k] - y[k - 1]) / (x[k] - x[k - 1]), x[k], x[k - 1]});
  }
  return fan;
}

GammaResult gamma_check(const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f, double u_minus, double u_plus) {
  GammaResult result;
  if (std::abs(g(u_minus) - f(u_plus)) > kFluxLevelTolerance) return result;
  if (u_minus == u_plus) return {true, u_minus};
  const double d = u_minus > u_plus ? 1.0 : -1.0;
  // u_Gamma may sit anywhere in [u_plus, a] by the f-condition and in
  // [b, u_minus] by the g-condition (ordered along d).
  const double a = reach(f, u_plus, u_minus, d);
  const double b = reach(g, u_minus, u_plus, d);
  const double slack = 1e-12 * g.domain().width();
  if (d * (a - b) < -slack) return result;
  result.pass = true;
  result.witness = 0.5 * (a + b);
  return result;
}

InterfaceSolution solve_interface(const PiecewiseLinearFlux& g, const PiecewiseLinearFlux& f, double ul,
                                  double ur) {
  std::vector<TracePair> tried;
  std::vector<TracePair> passing;
  collect(g, f, ul, ur, canonical_levels(g, f, ul, ur), tried, passing);
  if (passing.empty()) collect(g, f, ul, ur, all_levels(g, f), tried, passing);
  if (passing.empty()) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "no admissible interface pair for ul=" << ul << ", ur=" << ur
        << "; candidates:";
    for (const auto& p : tried) msg << " (" << p.u_minus << ", " << p.u_plus << ", level " << p.flux_level << ")";
    throw InfeasibleInterface(msg.str());
  }

  InterfaceSolution out;
  auto jump = [](const TracePair& p) { return std::abs(p.u_plus - p.u_minus); };
  const auto best = std::min_element(passing.begin(), passing.end(),
                                     [&](const TracePair& a, const TracePair& b) { return jump(a) < jump(b); });
  out.trace = *best;
  out.admissible = passing;
  const double same_tol = 1e-12 * g.domain().width();
  out.tie_break = std::any_of(passing.begin(), passing.end(), [&](const TracePair& p) {
    return std::abs(p.u_minus - best->u_minus) > same_tol || std::abs(p.u_plus - best->u_plus) > same_tol;
  });

  out.left = solve_classic(g, ul, out.trace.u_minus);
  out.right = solve_classic(f, out.trace.u_plus, ur);
  // A stationary front next to the interface belongs to the interface jump.
  while (!out.left.fronts.empty() && out.left.fronts.back().speed >= 0.0) {
    out.trace.u_minus = out.left.fronts.back().left;
    out.left.fronts.pop_back();
  }
  while (!out.right.fronts.empty() && out.right.fronts.front().speed <= 0.0) {
    out.trace.u_plus = out.right.fronts.front().right;
    out.right.fronts.erase(out.right.fronts.begin());
  }
  out.trace.flux_level = f(out.trace.u_plus);
  return out;
}

double rankine_hugoniot_defect(const PiecewiseLinearFlux& q, const WaveFan& fan) {
  double worst = 0.0;
  for (const auto& w : fan.fronts) {
    const double lhs = w.speed * (w.right - w.left);
    const double rhs = q(w.right) - q(w.left);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

std::string describe(const WaveFan& fan) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "speed,left,right\n";
  for (const auto& w : fan.fronts) out << w.speed << ',' << w.left << ',' << w.right << '\n';
  return out.str();
}

}  // namespace ftrack
