#include "ftrack/flux.hpp"

#include "ftrack/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace ftrack {

namespace {

constexpr double kGolden = 0.6180339887498948482;
constexpr int kSeedPoints = 1024;

// Golden-section search for the minimum of `fn` on [a, b].
template <class Fn>
std::pair<double, double> golden_minimize(Fn&& fn, double a, double b) {
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = fn(d);
    }
  }
  double x = 0.5 * (a + b);
  return {x, fn(x)};
}

// Seeded golden-section minimum of fn over [a, b], including both endpoints.
template <class Fn>
double seeded_minimum(Fn&& fn, double a, double b) {
  double best = std::min(fn(a), fn(b));
  if (b <= a) return best;
  const double h = (b - a) / (kSeedPoints - 1);
  int best_i = 0;
  double best_seed = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kSeedPoints; ++i) {
    const double value = fn(a + i * h);
    if (value < best_seed) {
      best_seed = value;
      best_i = i;
    }
  }
  const double lo = a + std::max(0, best_i - 1) * h;
  const double hi = a + std::min(kSeedPoints - 1, best_i + 1) * h;
  best = std::min(best, best_seed);
  best = std::min(best, golden_minimize(fn, lo, hi).second);
  return best;
}

void check_state(const StateInterval& domain, double u, const char* where) {
  const double slack = 1e-12 * std::max(1.0, domain.width());
  if (!std::isfinite(u) || !domain.contains(u, slack)) {
    std::ostringstream os;
    os << where << ": state " << u << " outside [" << domain.lower << ", " << domain.upper << "]";
    throw DomainError(os.str());
  }
}

}  // namespace

// SmoothFlux ---------------------------------------------------------------------

SmoothFlux::SmoothFlux(std::string label, Function eval, StateInterval domain, Bounds bounds,
                       std::optional<std::vector<double>> critical_points)
    : label_(std::move(label)),
      eval_(std::move(eval)),
      domain_(domain),
      bounds_(bounds),
      critical_points_(std::move(critical_points)) {
  if (!(domain_.lower < domain_.upper)) throw InvalidInput("flux domain must satisfy lower < upper");
  if (bounds_.lipschitz < 0 || bounds_.deriv2 < 0 || bounds_.sup_norm < 0)
    throw InvalidInput("flux bounds must be nonnegative");
  if (critical_points_) std::sort(critical_points_->begin(), critical_points_->end());
}

double SmoothFlux::min_on(double a, double b) const {
  if (a > b) std::swap(a, b);
  if (critical_points_) {
    double best = std::min(eval_(a), eval_(b));
    for (double c : *critical_points_)
      if (c > a && c < b) best = std::min(best, eval_(c));
    return best;
  }
  return seeded_minimum([this](double u) { return eval_(u); }, a, b);
}

double SmoothFlux::max_on(double a, double b) const {
  if (a > b) std::swap(a, b);
  if (critical_points_) {
    double best = std::max(eval_(a), eval_(b));
    for (double c : *critical_points_)
      if (c > a && c < b) best = std::max(best, eval_(c));
    return best;
  }
  return -seeded_minimum([this](double u) { return -eval_(u); }, a, b);
}

// PiecewiseLinearFlux ----------------------------------------------------------------

PiecewiseLinearFlux::PiecewiseLinearFlux(Eigen::VectorXd breakpoints, Eigen::VectorXd values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() < 2) throw InvalidPartition("piecewise-linear flux needs at least two breakpoints");
  if (breakpoints_.size() != values_.size())
    throw InvalidPartition("breakpoint and value tables differ in length");
  for (Eigen::Index k = 0; k < breakpoints_.size(); ++k) {
    if (!std::isfinite(breakpoints_[k]) || !std::isfinite(values_[k]))
      throw InvalidPartition("non-finite entry in flux table");
    if (k > 0 && !(breakpoints_[k] > breakpoints_[k - 1]))
      throw InvalidPartition("breakpoints must be strictly increasing");
  }
}

Eigen::Index PiecewiseLinearFlux::segment_of(double u) const {
  const double* begin = breakpoints_.data();
  const double* end = begin + breakpoints_.size();
  Eigen::Index k = std::upper_bound(begin, end, u) - begin - 1;
  return std::clamp<Eigen::Index>(k, 0, segments() - 1);
}

double PiecewiseLinearFlux::operator()(double u) const {
  check_state(domain(), u, "PiecewiseLinearFlux");
  const Eigen::Index k = segment_of(u);
  const double v0 = values_[k];
  const double v1 = values_[k + 1];
  if (v0 == v1) return v0;
  const double w = (u - breakpoints_[k]) / (breakpoints_[k + 1] - breakpoints_[k]);
  if (w <= 0.0) return v0;
  if (w >= 1.0) return v1;
  return (1.0 - w) * v0 + w * v1;
}

double PiecewiseLinearFlux::slope(Eigen::Index k) const {
  return (values_[k + 1] - values_[k]) / (breakpoints_[k + 1] - breakpoints_[k]);
}

double PiecewiseLinearFlux::mesh() const {
  const Eigen::Index n = breakpoints_.size();
  return (breakpoints_.tail(n - 1) - breakpoints_.head(n - 1)).maxCoeff();
}

double PiecewiseLinearFlux::lipschitz() const {
  double best = 0.0;
  for (Eigen::Index k = 0; k < segments(); ++k) best = std::max(best, std::abs(slope(k)));
  return best;
}

double PiecewiseLinearFlux::min_on(double a, double b) const {
  if (a > b) std::swap(a, b);
  double best = std::min((*this)(a), (*this)(b));
  const double* begin = breakpoints_.data();
  const double* end = begin + breakpoints_.size();
  for (const double* it = std::upper_bound(begin, end, a); it != end && *it < b; ++it)
    best = std::min(best, values_[it - begin]);
  return best;
}

double PiecewiseLinearFlux::max_on(double a, double b) const {
  if (a > b) std::swap(a, b);
  double best = std::max((*this)(a), (*this)(b));
  const double* begin = breakpoints_.data();
  const double* end = begin + breakpoints_.size();
  for (const double* it = std::upper_bound(begin, end, a); it != end && *it < b; ++it)
    best = std::max(best, values_[it - begin]);
  return best;
}

bool PiecewiseLinearFlux::operator==(const PiecewiseLinearFlux& other) const {
  return breakpoints_.size() == other.breakpoints_.size() && breakpoints_ == other.breakpoints_ &&
         values_ == other.values_;
}

// Built-ins -------------------------------------------------------------------------------

SmoothFlux polynomial_flux(std::span<const double> coefficients, StateInterval domain, std::string label) {
  if (coefficients.size() > 4) throw InvalidInput("polynomial flux supports degree at most 3");
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
  std::copy(coefficients.begin(), coefficients.end(), c.begin());
  auto q = [c](double u) { return c[0] + u * (c[1] + u * (c[2] + u * c[3])); };
  auto dq = [c](double u) { return c[1] + u * (2.0 * c[2] + u * 3.0 * c[3]); };
  auto d2q = [c](double u) { return 2.0 * c[2] + 6.0 * c[3] * u; };

  const double lo = domain.lower;
  const double hi = domain.upper;

  // Roots of q' = c1 + 2 c2 u + 3 c3 u^2.
  std::vector<double> roots;
  if (c[3] != 0.0) {
    const double a = 3.0 * c[3], b = 2.0 * c[2], cc = c[1];
    const double disc = b * b - 4.0 * a * cc;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      const double qq = -0.5 * (b + std::copysign(s, b));
      if (qq != 0.0) {
        roots.push_back(qq / a);
        roots.push_back(cc / qq);
      } else {
        roots.push_back(0.0);
      }
    }
  } else if (c[2] != 0.0) {
    roots.push_back(-c[1] / (2.0 * c[2]));
  }
  std::vector<double> critical;
  for (double r : roots)
    if (r > lo && r < hi) critical.push_back(r);
  std::sort(critical.begin(), critical.end());
  critical.erase(std::unique(critical.begin(), critical.end()), critical.end());

  std::vector<double> slope_probe{lo, hi};
  if (c[3] != 0.0) {
    const double vertex = -c[2] / (3.0 * c[3]);
    if (vertex > lo && vertex < hi) slope_probe.push_back(vertex);
  }
  SmoothFlux::Bounds bounds;
  double min_abs_slope = std::numeric_limits<double>::infinity();
  for (double u : slope_probe) {
    bounds.lipschitz = std::max(bounds.lipschitz, std::abs(dq(u)));
    min_abs_slope = std::min(min_abs_slope, std::abs(dq(u)));
  }
  bounds.deriv2 = std::max(std::abs(d2q(lo)), std::abs(d2q(hi)));
  bounds.sup_norm = std::max(std::abs(q(lo)), std::abs(q(hi)));
  for (double u : critical) bounds.sup_norm = std::max(bounds.sup_norm, std::abs(q(u)));

  bool root_in_closed = false;
  for (double r : roots)
    if (r >= lo && r <= hi) root_in_closed = true;
  const bool constant_slope_zero = c[1] == 0.0 && c[2] == 0.0 && c[3] == 0.0;
  if (!root_in_closed && !constant_slope_zero && min_abs_slope > 0.0) bounds.rho = min_abs_slope;

  return SmoothFlux(std::move(label), q, domain, bounds, std::move(critical));
}

SmoothFlux traffic_flux(double k) {
  if (!(k > 0.0)) throw InvalidInput("traffic flux needs k > 0");
  const std::array<double, 3> c{0.0, k, -k};
  std::ostringstream label;
  label << "traffic(" << k << ")";
  return polynomial_flux(c, {0.0, 1.0}, label.str());
}

SmoothFlux concave_burgers_flux(double scale, StateInterval domain) {
  if (!(scale > 0.0)) throw InvalidInput("burgers flux needs scale > 0");
  const std::array<double, 3> c{0.0, 0.0, -0.5 * scale};
  std::ostringstream label;
  label << "burgers-concave(" << scale << ")";
  return polynomial_flux(c, domain, label.str());
}

SmoothFlux exponential_flux(double amplitude, double rate) {
  if (!(amplitude > 0.0) || !(rate > 0.0)) throw InvalidInput("exponential flux needs amplitude, rate > 0");
  const double denom = std::expm1(rate);
  auto q = [amplitude, rate, denom](double u) { return amplitude * std::expm1(rate * u) / denom; };
  SmoothFlux::Bounds bounds;
  bounds.lipschitz = amplitude * rate * std::exp(rate) / denom;
  bounds.deriv2 = amplitude * rate * rate * std::exp(rate) / denom;
  bounds.sup_norm = amplitude;
  bounds.rho = amplitude * rate / denom;
  std::ostringstream label;
  label << "exponential(" << amplitude << "," << rate << ")";
  return SmoothFlux(label.str(), q, {0.0, 1.0}, bounds, std::vector<double>{});
}

SmoothFlux table_flux(const PiecewiseLinearFlux& table, double deriv2_bound, std::string label) {
  SmoothFlux::Bounds bounds;
  bounds.lipschitz = table.lipschitz();
  bounds.deriv2 = deriv2_bound;
  bounds.sup_norm = table.sup_norm();
  double min_slope = std::numeric_limits<double>::infinity();
  bool all_pos = true, all_neg = true;
  for (Eigen::Index k = 0; k < table.segments(); ++k) {
    const double s = table.slope(k);
    all_pos = all_pos && s > 0.0;
    all_neg = all_neg && s < 0.0;
    min_slope = std::min(min_slope, std::abs(s));
  }
  if (all_pos || all_neg) bounds.rho = min_slope;
  const auto& bp = table.breakpoints();
  std::vector<double> interior(bp.data() + 1, bp.data() + bp.size() - 1);
  return SmoothFlux(std::move(label), [table](double u) { return table(u); }, table.domain(), bounds,
                    std::move(interior));
}

// Interpolation -------------------------------------------------------------------------------

std::vector<double> uniform_breakpoints(StateInterval domain, double delta, std::span<const double> extra) {
  if (!(delta > 0.0)) throw InvalidPartition("breakpoint spacing must be positive");
  const double width = domain.width();
  const auto count = static_cast<long>(std::ceil(width / delta - 1e-12));
  const long n = std::max<long>(count, 1);
  const double h = width / static_cast<double>(n);

  std::vector<std::pair<double, bool>> points;
  points.reserve(n + 1 + extra.size());
  for (long k = 0; k < n; ++k) points.emplace_back(domain.lower + static_cast<double>(k) * h, false);
  points.emplace_back(domain.upper, false);
  for (double e : extra)
    if (e > domain.lower && e < domain.upper) points.emplace_back(e, true);
  std::sort(points.begin(), points.end());

  const double merge_tol = 1e-12 * width;
  std::vector<std::pair<double, bool>> merged;
  for (const auto& p : points) {
    if (!merged.empty() && p.first - merged.back().first <= merge_tol) {
      const bool back_is_endpoint = merged.size() == 1;
      if (p.second && !back_is_endpoint) merged.back() = p;
      continue;
    }
    merged.push_back(p);
  }
  // The upper endpoint must survive merging.
  if (merged.back().first != domain.upper) {
    if (domain.upper - merged.back().first <= merge_tol && merged.size() > 1)
      merged.back().first = domain.upper;
    else
      merged.emplace_back(domain.upper, false);
  }
  std::vector<double> out;
  out.reserve(merged.size());
  for (const auto& p : merged) out.push_back(p.first);
  return out;
}

std::vector<double> make_breakpoints(const SmoothFlux& q, const BreakpointOptions& options) {
  std::vector<double> extra = options.extra;
  if (options.include_critical_points && q.critical_points())
    extra.insert(extra.end(), q.critical_points()->begin(), q.critical_points()->end());
  return uniform_breakpoints(q.domain(), options.delta, extra);
}

PiecewiseLinearFlux interpolate(const SmoothFlux& q, std::span<const double> breakpoints) {
  const StateInterval& dom = q.domain();
  const double tol = 1e-12 * dom.width();
  if (breakpoints.size() < 2) throw InvalidPartition("need at least two breakpoints");
  if (std::abs(breakpoints.front() - dom.lower) > tol || std::abs(breakpoints.back() - dom.upper) > tol)
    throw InvalidPartition("breakpoints must start at the lower and end at the upper state");
  Eigen::VectorXd bp(static_cast<Eigen::Index>(breakpoints.size()));
  Eigen::VectorXd val(bp.size());
  for (Eigen::Index k = 0; k < bp.size(); ++k) {
    bp[k] = breakpoints[static_cast<std::size_t>(k)];
    if (!dom.contains(bp[k], tol)) throw InvalidPartition("breakpoint outside the flux domain");
    if (k > 0 && !(bp[k] > bp[k - 1])) throw InvalidPartition("breakpoints must be strictly increasing");
  }
  bp[0] = dom.lower;
  bp[bp.size() - 1] = dom.upper;
  for (Eigen::Index k = 0; k < bp.size(); ++k) val[k] = q(bp[k]);
  return PiecewiseLinearFlux(std::move(bp), std::move(val));
}

PiecewiseLinearFlux interpolate(const SmoothFlux& q, const BreakpointOptions& options) {
  return interpolate(q, make_breakpoints(q, options));
}

double sup_gap(const SmoothFlux& q, const PiecewiseLinearFlux& qd) {
  const StateInterval dom = qd.domain();
  const double h = dom.width() / (kDenseSamples - 1);
  auto gap = [&](double u) { return std::abs(q(u) - qd(u)); };

  const Eigen::Index segs = qd.segments();
  std::vector<double> best_value(static_cast<std::size_t>(segs), -1.0);
  std::vector<double> best_at(static_cast<std::size_t>(segs), 0.0);
  double result = 0.0;
  for (int i = 0; i < kDenseSamples; ++i) {
    const double u = (i == kDenseSamples - 1) ? dom.upper : dom.lower + i * h;
    const double value = gap(u);
    result = std::max(result, value);
    const auto k = static_cast<std::size_t>(qd.segment_of(u));
    if (value > best_value[k]) {
      best_value[k] = value;
      best_at[k] = u;
    }
  }
  const auto& bp = qd.breakpoints();
  for (Eigen::Index k = 0; k < segs; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    double lo = bp[k], hi = bp[k + 1];
    if (best_value[kk] >= 0.0) {
      lo = std::max(lo, best_at[kk] - h);
      hi = std::min(hi, best_at[kk] + h);
    }
    const auto refined = golden_minimize([&](double u) { return -gap(u); }, lo, hi);
    result = std::max(result, -refined.second);
  }
  return result;
}

double sup_gap(const PiecewiseLinearFlux& a, const PiecewiseLinearFlux& b) {
  double result = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) result = std::max(result, std::abs(a.values()[k] - b(a.breakpoints()[k])));
  for (Eigen::Index k = 0; k < b.size(); ++k) result = std::max(result, std::abs(a(b.breakpoints()[k]) - b.values()[k]));
  return result;
}

// Godunov flux --------------------------------------------------------------------------------

double godunov_flux(const PiecewiseLinearFlux& q, double v, double u) {
  check_state(q.domain(), u, "godunov_flux");
  check_state(q.domain(), v, "godunov_flux");
  if (u == v) return q(u);
  return u <= v ? q.min_on(u, v) : q.max_on(v, u);
}

double godunov_flux(const SmoothFlux& q, double v, double u) {
  check_state(q.domain(), u, "godunov_flux");
  check_state(q.domain(), v, "godunov_flux");
  if (u == v) return q(u);
  return u <= v ? q.min_on(u, v) : q.max_on(v, u);
}

double godunov_flux_gap(const SmoothFlux& q, const PiecewiseLinearFlux& qd, double v, double u) {
  return std::abs(godunov_flux(qd, v, u) - godunov_flux(q, v, u));
}

// Envelopes -------------------------------------------------------------------------------------

namespace {

// Lower convex hull of (x, sign * y) points taken from q on [a, b]; result in original sign.
PiecewiseLinearFlux hull(const PiecewiseLinearFlux& q, double a, double b, double sign) {
  if (!(a < b)) throw InvalidPartition("envelope needs a < b");
  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(a, sign * q(a));
  const auto& bp = q.breakpoints();
  const double* begin = bp.data();
  const double* end = begin + bp.size();
  for (const double* it = std::upper_bound(begin, end, a); it != end && *it < b; ++it)
    pts.emplace_back(*it, sign * q.values()[it - begin]);
  pts.emplace_back(b, sign * q(b));

  std::vector<std::pair<double, double>> h;
  h.reserve(pts.size());
  for (const auto& p : pts) {
    while (h.size() >= 2) {
      const auto& o = h[h.size() - 2];
      const auto& m = h[h.size() - 1];
      const double s1 = (m.second - o.second) / (m.first - o.first);
      const double s2 = (p.second - m.second) / (p.first - m.first);
      const double tol = 1e-14 * std::max({1.0, std::abs(s1), std::abs(s2)});
      if (s2 <= s1 + tol)
        h.pop_back();
      else
        break;
    }
    h.push_back(p);
  }
  Eigen::VectorXd x(static_cast<Eigen::Index>(h.size()));
  Eigen::VectorXd y(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    x[k] = h[static_cast<std::size_t>(k)].first;
    y[k] = sign * h[static_cast<std::size_t>(k)].second;
  }
  return PiecewiseLinearFlux(std::move(x), std::move(y));
}

}  // namespace

PiecewiseLinearFlux lower_convex_envelope(const PiecewiseLinearFlux& q, double a, double b) {
  return hull(q, a, b, 1.0);
}

PiecewiseLinearFlux upper_concave_envelope(const PiecewiseLinearFlux& q, double a, double b) {
  return hull(q, a, b, -1.0);
}

// Crossings -------------------------------------------------------------------------------------

CrossingReport find_crossings(const PiecewiseLinearFlux& f, const PiecewiseLinearFlux& g) {
  std::vector<double> pts(f.breakpoints().data(), f.breakpoints().data() + f.size());
  pts.insert(pts.end(), g.breakpoints().data(), g.breakpoints().data() + g.size());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const std::size_t n = pts.size();
  std::vector<double> d(n);
  std::vector<bool> zero(n);
  for (std::size_t k = 0; k < n; ++k) {
    d[k] = f(pts[k]) - g(pts[k]);
    zero[k] = std::abs(d[k]) <= kCrossingTolerance;
  }
  auto sgn = [](double x) { return x > 0.0 ? 1 : -1; };

  CrossingReport report;
  std::size_t i = 0;
  while (i < n) {
    if (zero[i]) {
      std::size_t j = i;
      while (j + 1 < n && zero[j + 1]) ++j;
      if (j > i) {
        report.overlaps.emplace_back(pts[i], pts[j]);
      } else if (i > 0 && i + 1 < n && !zero[i - 1] && !zero[i + 1] && sgn(d[i - 1]) != sgn(d[i + 1])) {
        report.crossings.push_back({pts[i], sgn(d[i + 1])});
      }
      i = j + 1;
      continue;
    }
    if (i + 1 < n && !zero[i + 1] && sgn(d[i]) != sgn(d[i + 1])) {
      const double w = d[i] / (d[i] - d[i + 1]);
      report.crossings.push_back({pts[i] + w * (pts[i + 1] - pts[i]), sgn(d[i + 1])});
    }
    ++i;
  }
  return report;
}

}  // namespace ftrack
