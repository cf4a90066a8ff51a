#pragma once

#include <span>
#include <vector>

namespace ftrack {

/// Right-continuous piecewise-constant function of x.
///
/// values()[0] holds on (-inf, jumps[0]), values()[i] on [jumps[i-1], jumps[i]),
/// and values().back() on [jumps.back(), inf). Jump positions are strictly
/// increasing and adjacent values differ.
class StepFunction {
 public:
  explicit StepFunction(double constant = 0.0);
  StepFunction(std::vector<double> jumps, std::vector<double> values);

  /// Builds from nondecreasing positions, dropping zero-width intervals and
  /// zero-strength jumps.
  static StepFunction from_breaks(std::span<const double> positions, std::span<const double> values);

  double operator()(double x) const;
  const std::vector<double>& jumps() const { return jumps_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t jump_count() const { return jumps_.size(); }
  double left_value() const { return values_.front(); }
  double right_value() const { return values_.back(); }

  /// Exact integral of the function over [a, b].
  double integral(double a, double b) const;

  bool operator==(const StepFunction& other) const = default;

 private:
  std::vector<double> jumps_;
  std::vector<double> values_;
};

/// Removes jumps with |strength| < tol by merging neighbouring intervals.
StepFunction drop_small_jumps(const StepFunction& w, double tol);

/// Continuous piecewise-affine function of x: values at knots, slope 0 to the
/// left of the first knot and `right_slope` beyond the last.
class PiecewiseAffine {
 public:
  PiecewiseAffine(std::vector<double> knots, std::vector<double> values, double right_slope);

  double operator()(double x) const;
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  double right_slope() const { return right_slope_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  double right_slope_;
};

/// x -> integral_{-inf}^x (w(y) - u_left) dy in closed form.
PiecewiseAffine indefinite_integral(const StepFunction& w, double u_left);

}  // namespace ftrack
