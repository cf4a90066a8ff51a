#include "ftrack/step_function.hpp"

#include "ftrack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace ftrack {

StepFunction::StepFunction(double constant) : values_{constant} {
  if (!std::isfinite(constant)) throw InvalidInput("step function value must be finite");
}

StepFunction::StepFunction(std::vector<double> jumps, std::vector<double> values)
    : jumps_(std::move(jumps)), values_(std::move(values)) {
  if (values_.size() != jumps_.size() + 1) throw InvalidInput("step function needs one more value than jumps");
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    if (!std::isfinite(jumps_[i])) throw InvalidInput("jump position must be finite");
    if (i > 0 && !(jumps_[i] > jumps_[i - 1])) throw InvalidInput("jump positions must be strictly increasing");
  }
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidInput("step function value must be finite");
  // Merge zero-strength jumps.
  std::vector<double> j;
  std::vector<double> v{values_.front()};
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    if (values_[i + 1] == v.back()) continue;
    j.push_back(jumps_[i]);
    v.push_back(values_[i + 1]);
  }
  jumps_ = std::move(j);
  values_ = std::move(v);
}

StepFunction StepFunction::from_breaks(std::span<const double> positions, std::span<const double> values) {
  if (values.size() != positions.size() + 1) throw InvalidInput("step function needs one more value than jumps");
  std::vector<double> j;
  std::vector<double> v{values.front()};
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i > 0 && positions[i] < positions[i - 1]) throw InvalidInput("break positions must be nondecreasing");
    if (!j.empty() && positions[i] == j.back()) {
      // Zero-width interval: the later value overrides.
      v.back() = values[i + 1];
      if (v.size() >= 2 && v.back() == v[v.size() - 2]) {
        v.pop_back();
        j.pop_back();
      }
      continue;
    }
    if (values[i + 1] == v.back()) continue;
    j.push_back(positions[i]);
    v.push_back(values[i + 1]);
  }
  return StepFunction(std::move(j), std::move(v));
}

double StepFunction::operator()(double x) const {
  const auto idx = static_cast<std::size_t>(std::upper_bound(jumps_.begin(), jumps_.end(), x) - jumps_.begin());
  return values_[idx];
}

double StepFunction::integral(double a, double b) const {
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  double total = 0.0;
  double cursor = a;
  auto idx = static_cast<std::size_t>(std::upper_bound(jumps_.begin(), jumps_.end(), a) - jumps_.begin());
  while (cursor < b) {
    const double next = idx < jumps_.size() ? std::min(jumps_[idx], b) : b;
    total += values_[idx] * (next - cursor);
    cursor = next;
    ++idx;
  }
  return sign * total;
}

StepFunction drop_small_jumps(const StepFunction& w, double tol) {
  const auto& jumps = w.jumps();
  const auto& values = w.values();
  std::vector<double> j;
  std::vector<double> v{values.front()};
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    if (std::abs(values[i + 1] - v.back()) < tol) {
      // Keep the far-field values exact.
      if (i + 1 == jumps.size()) v.back() = values.back();
      continue;
    }
    j.push_back(jumps[i]);
    v.push_back(values[i + 1]);
  }
  if (v.size() >= 2 && v.back() == v[v.size() - 2]) {
    v.pop_back();
    j.pop_back();
  }
  return StepFunction(std::move(j), std::move(v));
}

PiecewiseAffine::PiecewiseAffine(std::vector<double> knots, std::vector<double> values, double right_slope)
    : knots_(std::move(knots)), values_(std::move(values)), right_slope_(right_slope) {
  if (knots_.empty() || knots_.size() != values_.size())
    throw InvalidInput("piecewise-affine function needs matching, nonempty knot and value lists");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i] > knots_[i - 1])) throw InvalidInput("knots must be strictly increasing");
}

double PiecewiseAffine::operator()(double x) const {
  if (x <= knots_.front()) return values_.front();
  if (x >= knots_.back()) return values_.back() + right_slope_ * (x - knots_.back());
  const auto k = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), x) - knots_.begin()) - 1;
  const double w = (x - knots_[k]) / (knots_[k + 1] - knots_[k]);
  return (1.0 - w) * values_[k] + w * values_[k + 1];
}

PiecewiseAffine indefinite_integral(const StepFunction& w, double u_left) {
  if (w.left_value() != u_left)
    throw DivergentIntegral("indefinite integral needs w = u_left on a left half-line");
  const auto& jumps = w.jumps();
  const auto& values = w.values();
  if (jumps.empty()) return PiecewiseAffine({0.0}, {0.0}, 0.0);
  std::vector<double> knots(jumps.begin(), jumps.end());
  std::vector<double> acc(knots.size());
  acc[0] = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i)
    acc[i] = acc[i - 1] + (values[i] - u_left) * (knots[i] - knots[i - 1]);
  return PiecewiseAffine(std::move(knots), std::move(acc), values.back() - u_left);
}

}  // namespace ftrack
