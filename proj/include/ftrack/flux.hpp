#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ftrack {

/// Closed state interval [lower, upper] on which fluxes and solutions live.
struct StateInterval {
  double lower = 0.0;
  double upper = 1.0;

  double width() const { return upper - lower; }
  bool contains(double u, double slack = 0.0) const {
    return u >= lower - slack && u <= upper + slack;
  }
};

/// A C^2 flux together with the constants the error bounds need.
///
/// The constants are supplied by construction (closed form for the built-in
/// families) and are never estimated by sampling. `critical_points`, when
/// present, lists every interior critical point; interval extrema are then
/// evaluated exactly instead of by golden-section search.
class SmoothFlux {
 public:
  using Function = std::function<double(double)>;

  struct Bounds {
    double lipschitz = 0.0;     ///< L_q = max |q'|
    double deriv2 = 0.0;        ///< ||q''||_inf
    double sup_norm = 0.0;      ///< ||q||_inf
    std::optional<double> rho;  ///< inf |q'| when q is strictly monotone
  };

  SmoothFlux(std::string label, Function eval, StateInterval domain, Bounds bounds,
             std::optional<std::vector<double>> critical_points = std::nullopt);

  double operator()(double u) const { return eval_(u); }
  const std::string& label() const { return label_; }
  const StateInterval& domain() const { return domain_; }
  double lipschitz() const { return bounds_.lipschitz; }
  double deriv2_bound() const { return bounds_.deriv2; }
  double sup_norm() const { return bounds_.sup_norm; }
  const std::optional<double>& rho() const { return bounds_.rho; }
  const std::optional<std::vector<double>>& critical_points() const { return critical_points_; }

  /// min of q over [a, b] (a <= b).
  double min_on(double a, double b) const;
  /// max of q over [a, b] (a <= b).
  double max_on(double a, double b) const;

 private:
  std::string label_;
  Function eval_;
  StateInterval domain_;
  Bounds bounds_;
  std::optional<std::vector<double>> critical_points_;
};

/// Continuous piecewise-linear flux given by its values at strictly
/// increasing breakpoints. Immutable.
class PiecewiseLinearFlux {
 public:
  PiecewiseLinearFlux(Eigen::VectorXd breakpoints, Eigen::VectorXd values);

  double operator()(double u) const;

  const Eigen::VectorXd& breakpoints() const { return breakpoints_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index size() const { return breakpoints_.size(); }
  Eigen::Index segments() const { return breakpoints_.size() - 1; }
  StateInterval domain() const { return {breakpoints_[0], breakpoints_[breakpoints_.size() - 1]}; }
  double slope(Eigen::Index k) const;
  /// Maximum breakpoint spacing.
  double mesh() const;
  /// max |slope| over all segments.
  double lipschitz() const;
  double sup_norm() const { return values_.cwiseAbs().maxCoeff(); }
  /// Index k of the segment [u_k, u_{k+1}] containing u (interior ties go right).
  Eigen::Index segment_of(double u) const;

  double min_on(double a, double b) const;
  double max_on(double a, double b) const;

  bool operator==(const PiecewiseLinearFlux& other) const;

 private:
  Eigen::VectorXd breakpoints_;
  Eigen::VectorXd values_;
};

// Built-in smooth fluxes ----------------------------------------------------

/// q(u) = c0 + c1 u + c2 u^2 + c3 u^3 on `domain` (at most cubic).
SmoothFlux polynomial_flux(std::span<const double> coefficients, StateInterval domain,
                           std::string label = "polynomial");
/// LWR traffic flux k u (1 - u) on [0, 1].
SmoothFlux traffic_flux(double k);
/// Concave Burgers-type flux -scale u^2 / 2 on `domain`.
SmoothFlux concave_burgers_flux(double scale, StateInterval domain = {-1.0, 1.0});
/// amplitude (e^{rate u} - 1) / (e^{rate} - 1) on [0, 1]; strictly increasing for rate > 0.
SmoothFlux exponential_flux(double amplitude, double rate);
/// Wraps a literal breakpoint table; the caller supplies the curvature bound.
SmoothFlux table_flux(const PiecewiseLinearFlux& table, double deriv2_bound,
                      std::string label = "table");

// Interpolation ---------------------------------------------------------------

struct BreakpointOptions {
  double delta = 0.1;
  /// Append the flux's interior critical points.
  bool include_critical_points = false;
  /// Additional states to insert (e.g. far-field data values).
  std::vector<double> extra;
};

/// Uniform breakpoints of spacing at most `delta` over `domain`, merged with `extra`.
std::vector<double> uniform_breakpoints(StateInterval domain, double delta,
                                        std::span<const double> extra = {});
std::vector<double> make_breakpoints(const SmoothFlux& q, const BreakpointOptions& options);

/// Piecewise-linear interpolant of q at `breakpoints`.
PiecewiseLinearFlux interpolate(const SmoothFlux& q, std::span<const double> breakpoints);
PiecewiseLinearFlux interpolate(const SmoothFlux& q, const BreakpointOptions& options);

/// Number of points in the dense sampling grid used for sup-norm estimates.
inline constexpr int kDenseSamples = 16384;

/// max |q - qd| over a dense grid, refined by golden-section search per segment.
double sup_gap(const SmoothFlux& q, const PiecewiseLinearFlux& qd);
/// Exact max |a - b| for two piecewise-linear fluxes on the same domain.
double sup_gap(const PiecewiseLinearFlux& a, const PiecewiseLinearFlux& b);

// Godunov numerical flux -------------------------------------------------------

/// min of q on [u, v] if u <= v, max of q on [v, u] otherwise.
double godunov_flux(const PiecewiseLinearFlux& q, double v, double u);
double godunov_flux(const SmoothFlux& q, double v, double u);
/// |qd_bar(v, u) - q_bar(v, u)|.
double godunov_flux_gap(const SmoothFlux& q, const PiecewiseLinearFlux& qd, double v, double u);

// Envelopes --------------------------------------------------------------------

/// Greatest convex minorant of q on [a, b], a < b.
PiecewiseLinearFlux lower_convex_envelope(const PiecewiseLinearFlux& q, double a, double b);
/// Least concave majorant of q on [a, b], a < b.
PiecewiseLinearFlux upper_concave_envelope(const PiecewiseLinearFlux& q, double a, double b);

// Crossings ----------------------------------------------------------------------

struct Crossing {
  double location = 0.0;
  /// +1 when f - g goes from negative to positive with increasing u, -1 otherwise.
  int sign_change = 0;
};

struct CrossingReport {
  std::vector<Crossing> crossings;
  /// Subintervals on which f - g vanishes identically.
  std::vector<std::pair<double, double>> overlaps;

  bool degenerate() const { return !overlaps.empty(); }
};

inline constexpr double kCrossingTolerance = 1e-12;

/// Sign-changing zeros of f - g in the open state interval.
CrossingReport find_crossings(const PiecewiseLinearFlux& f, const PiecewiseLinearFlux& g);

}  // namespace ftrack
