#pragma once

#include "ftrack/problem.hpp"
#include "ftrack/step_function.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace ftrack {

/// Piecewise-affine function of x that may jump between pieces: u = c0 + c1 x
/// on [a, b), `left` before the first piece and `right` after the last.
struct LinearProfile {
  struct Piece {
    double a = 0.0;
    double b = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
  };
  double left = 0.0;
  double right = 0.0;
  std::vector<Piece> pieces;

  double operator()(double x) const;
};

/// Exact integral of |a - b| over the real line.
double l1_distance(const StepFunction& a, const StepFunction& b);
double l1_distance(const StepFunction& a, const LinearProfile& b);
/// Exact integral of a - b over the real line.
double integral_difference(const StepFunction& a, const StepFunction& b);
/// sup |a_hat - b_hat| with x_hat = integral_{-inf}^x (x - u_left).
double linf_hat_distance(const StepFunction& a, const StepFunction& b, double u_left);
/// sup |a - b| for continuous piecewise-affine functions with equal tail slopes.
double sup_distance(const PiecewiseAffine& a, const PiecewiseAffine& b);

double total_variation(const StepFunction& a);
/// Variation of a grid row padded by the far-field values.
double total_variation(const Eigen::VectorXd& row, double u_left, double u_right);

/// Constants of the explicit error bounds.
struct BoundConstants {
  double Y = 0.0;
  double C1 = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  /// Present when both fluxes are strictly increasing with known rho, or f = g.
  std::optional<double> K3;
  std::optional<double> rho;
  double tv = 0.0;
  double state_width = 0.0;
};

BoundConstants bound_constants(const TwoFluxProblem& problem);

/// L1 error bound for general data; `init_l1` is ||u0 - u0^delta||_L1 and is
/// only used, together with delta TV(u0), when `restricted` is false.
double main_bound_rhs(const BoundConstants& c, double delta, bool restricted, double init_l1 = 0.0);
/// First-order bound available when K3 is known.
double bv_bound_rhs(const BoundConstants& c, double delta, bool restricted, double init_l1 = 0.0);
/// TV(u0) + 4 K1 / r.
double local_bv_bound(const BoundConstants& c, double r);
/// sum of |U_{j+1} - U_j| over x_j > r plus |U_j - U_{j-1}| over x_j < -r.
double local_variation(const Eigen::VectorXd& row, long first, double dx, double r, double u_left, double u_right);

struct ErrorRecord {
  double delta = 0.0;
  double l1_error = 0.0;
  double bound_rhs = 0.0;
  /// log2(e(2 delta) / e(delta)); empty for the coarsest record.
  std::optional<double> order_pairwise;
  double runtime_s = 0.0;
  std::size_t front_count = 0;
  std::string note;
};

struct RateFit {
  double slope = 0.0;
  std::vector<double> pairwise;
  std::size_t used = 0;
  std::vector<std::string> notes;
};

/// Least-squares slope of log error against log delta; records with zero
/// error are skipped with a note. Fills order_pairwise in `records`.
RateFit fit_rate(std::vector<ErrorRecord>& records);

/// Entropy solution of the Riemann problem for k u (1 - u) at time t > 0.
LinearProfile exact_quadratic_riemann(double k, double ul, double ur, double t);

}  // namespace ftrack
