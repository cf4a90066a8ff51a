#include "ftrack/analysis.hpp"

#include "ftrack/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ftrack {

namespace {

void require_far_fields(const StepFunction& a, const StepFunction& b) {
  if (a.left_value() != b.left_value() || a.right_value() != b.right_value())
    throw DivergentIntegral("far-field values differ; the integral over the real line diverges");
}

std::vector<double> merged_jumps(const StepFunction& a, const StepFunction& b) {
  std::vector<double> x;
  x.reserve(a.jump_count() + b.jump_count());
  std::merge(a.jumps().begin(), a.jumps().end(), b.jumps().begin(), b.jumps().end(), std::back_inserter(x));
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

// Exact integral of |c0 + c1 x| over [a, b].
double abs_affine_integral(double c0, double c1, double a, double b) {
  if (!(b > a)) return 0.0;
  const double fa = c0 + c1 * a;
  const double fb = c0 + c1 * b;
  if ((fa >= 0.0 && fb >= 0.0) || (fa <= 0.0 && fb <= 0.0)) return 0.5 * std::abs(fa + fb) * (b - a);
  const double root = a + fa / (fa - fb) * (b - a);
  return 0.5 * (std::abs(fa) * (root - a) + std::abs(fb) * (b - root));
}

}  // namespace

double LinearProfile::operator()(double x) const {
  if (pieces.empty() || x < pieces.front().a) return left;
  for (const auto& p : pieces)
    if (x >= p.a && x < p.b) return p.c0 + p.c1 * x;
  return right;
}

double l1_distance(const StepFunction& a, const StepFunction& b) {
  require_far_fields(a, b);
  const auto x = merged_jumps(a, b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double mid = 0.5 * (x[i] + x[i + 1]);
    total += std::abs(a(mid) - b(mid)) * (x[i + 1] - x[i]);
  }
  return total;
}

double l1_distance(const StepFunction& a, const LinearProfile& b) {
  if (a.left_value() != b.left || a.right_value() != b.right)
    throw DivergentIntegral("far-field values differ; the integral over the real line diverges");
  std::vector<double> x(a.jumps());
  for (const auto& p : b.pieces) {
    x.push_back(p.a);
    x.push_back(p.b);
  }
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double lo = x[i];
    const double hi = x[i + 1];
    const double mid = 0.5 * (lo + hi);
    const double s = a(mid);
    double c0 = b.left - s;
    double c1 = 0.0;
    if (!b.pieces.empty() && mid >= b.pieces.front().a) {
      c0 = b.right - s;
      for (const auto& p : b.pieces)
        if (mid >= p.a && mid < p.b) {
          c0 = p.c0 - s;
          c1 = p.c1;
          break;
        }
    }
    total += abs_affine_integral(c0, c1, lo, hi);
  }
  return total;
}

double integral_difference(const StepFunction& a, const StepFunction& b) {
  require_far_fields(a, b);
  const auto x = merged_jumps(a, b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double mid = 0.5 * (x[i] + x[i + 1]);
    total += (a(mid) - b(mid)) * (x[i + 1] - x[i]);
  }
  return total;
}

double linf_hat_distance(const StepFunction& a, const StepFunction& b, double u_left) {
  require_far_fields(a, b);
  if (a.left_value() != u_left) throw DivergentIntegral("left far field differs from u_left");
  // Both hats are affine between merged jumps, so the sup sits at a jump.
  const auto x = merged_jumps(a, b);
  double diff = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double mid = 0.5 * (x[i] + x[i + 1]);
    diff += (a(mid) - b(mid)) * (x[i + 1] - x[i]);
    best = std::max(best, std::abs(diff));
  }
  return best;
}

double sup_distance(const PiecewiseAffine& a, const PiecewiseAffine& b) {
  if (a.right_slope() != b.right_slope())
    throw DivergentIntegral("piecewise-affine functions with different tail slopes are unbounded apart");
  std::vector<double> x;
  std::merge(a.knots().begin(), a.knots().end(), b.knots().begin(), b.knots().end(), std::back_inserter(x));
  double best = 0.0;
  for (double v : x) best = std::max(best, std::abs(a(v) - b(v)));
  return best;
}

double total_variation(const StepFunction& a) {
  double tv = 0.0;
  const auto& v = a.values();
  for (std::size_t i = 1; i < v.size(); ++i) tv += std::abs(v[i] - v[i - 1]);
  return tv;
}

double total_variation(const Eigen::VectorXd& row, double u_left, double u_right) {
  if (row.size() == 0) return std::abs(u_right - u_left);
  double tv = std::abs(row[0] - u_left) + std::abs(u_right - row[row.size() - 1]);
  for (Eigen::Index k = 1; k < row.size(); ++k) tv += std::abs(row[k] - row[k - 1]);
  return tv;
}

BoundConstants bound_constants(const TwoFluxProblem& problem) {
  const SmoothFlux& g = problem.left_flux;
  const SmoothFlux& f = problem.right_flux;
  for (const SmoothFlux* q : {&g, &f}) {
    if (!(std::isfinite(q->lipschitz()) && q->lipschitz() >= 0.0 && std::isfinite(q->deriv2_bound()) &&
          q->deriv2_bound() >= 0.0 && std::isfinite(q->sup_norm()) && q->sup_norm() >= 0.0))
      throw ConfigurationError("flux '" + q->label() + "' lacks valid derivative bounds");
  }
  const double T = problem.horizon;
  const double max_l = std::max(f.lipschitz(), g.lipschitz());
  const double sup_sum = f.sup_norm() + g.sup_norm();
  BoundConstants c;
  c.tv = total_variation(problem.initial);
  c.state_width = problem.states().width();
  c.Y = problem.support_radius + 2.0 * T * max_l;
  c.C1 = 1.0 + 0.125 * T * std::max(f.deriv2_bound(), g.deriv2_bound());
  c.K1 = 2.0 * T * max_l * c.tv + T * sup_sum;
  c.K2 = c.state_width + c.tv;
  if (problem.same_flux) {
    c.K3 = c.tv;
  } else if (f.rho() && g.rho()) {
    c.rho = std::min(*f.rho(), *g.rho());
    if (*c.rho > 0.0) c.K3 = (c.state_width + max_l * c.tv + sup_sum) / *c.rho;
  }
  return c;
}

double main_bound_rhs(const BoundConstants& c, double delta, bool restricted, double init_l1) {
  double rhs = std::sqrt(2.0 * c.Y * c.C1 * (c.K2 * delta * delta + 4.0 * c.K1 * delta)) +
               2.0 * c.state_width * delta;
  if (!restricted) rhs += delta * c.tv + init_l1;
  return rhs;
}

double bv_bound_rhs(const BoundConstants& c, double delta, bool restricted, double init_l1) {
  if (!c.K3) throw ConfigurationError("first-order bound needs K3 (strictly monotone fluxes or f = g)");
  double rhs = 2.0 * std::sqrt(c.Y * *c.K3 * c.C1) * delta;
  if (!restricted) rhs += delta * c.tv + init_l1;
  return rhs;
}

double local_bv_bound(const BoundConstants& c, double r) {
  if (!(r > 0.0)) throw InvalidInput("r must be positive");
  return c.tv + 4.0 * c.K1 / r;
}

double local_variation(const Eigen::VectorXd& row, long first, double dx, double r, double u_left, double u_right) {
  const long n = static_cast<long>(row.size());
  auto value = [&](long j) {
    if (j < first) return u_left;
    if (j >= first + n) return u_right;
    return row[j - first];
  };
  double total = 0.0;
  for (long j = first - 1; j <= first + n; ++j) {
    const double x = static_cast<double>(j) * dx;
    if (x > r) total += std::abs(value(j + 1) - value(j));
    if (x < -r) total += std::abs(value(j) - value(j - 1));
  }
  return total;
}

RateFit fit_rate(std::vector<ErrorRecord>& records) {
  RateFit fit;
  std::vector<double> lx;
  std::vector<double> ly;
  for (auto& r : records) {
    if (!(r.l1_error > 0.0)) {
      fit.notes.push_back("delta=" + std::to_string(r.delta) + " excluded: zero error");
      continue;
    }
    lx.push_back(std::log(r.delta));
    ly.push_back(std::log(r.l1_error));
  }
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    auto& b = records[i];
    if (a.l1_error > 0.0 && b.l1_error > 0.0 && a.delta != b.delta) {
      b.order_pairwise = std::log(a.l1_error / b.l1_error) / std::log(a.delta / b.delta);
      fit.pairwise.push_back(*b.order_pairwise);
    }
  }
  fit.used = lx.size();
  if (lx.size() < 2) throw InvalidInput("rate fit needs at least two records with nonzero error");
  if (lx.size() < 3) fit.notes.push_back("fewer than three usable records");
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(sxx > 0.0)) throw InvalidInput("rate fit needs distinct delta values");
  fit.slope = sxy / sxx;
  return fit;
}

LinearProfile exact_quadratic_riemann(double k, double ul, double ur, double t) {
  if (!(t > 0.0)) throw InvalidInput("exact solution needs t > 0");
  LinearProfile p;
  p.left = ul;
  p.right = ur;
  if (ul == ur) return p;
  if (ul < ur) {
    // Concave flux, increasing jump: a single shock.
    const double s = k * (1.0 - ul - ur);
    // Zero-width piece: ul before s t, ur from s t on.
    p.pieces.push_back({s * t, s * t, ur, 0.0});
    return p;
  }
  // Rarefaction: k (1 - 2u) = x / t.
  const double a = k * (1.0 - 2.0 * ul) * t;
  const double b = k * (1.0 - 2.0 * ur) * t;
  p.pieces.push_back({a, b, 0.5, -0.5 / (k * t)});
  return p;
}

}  // namespace ftrack
