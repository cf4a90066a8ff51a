#pragma once

#include "ftrack/step_function.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace ftrack {

/// Partition of [-X, X] fine in both x and in the variation of u_0.
struct BVPartition {
  std::vector<double> points;          ///< z_0 = -X < ... < z_M = X
  std::vector<double> cell_variation;  ///< TV(u_0) on (z_{i-1}, z_i), i = 1..M
  std::vector<double> variation_points;  ///< the xi_mu sequence
  double delta = 0.0;
};

/// Common refinement of the uniform delta-partition of [-X, X] and the
/// variation partition generated by Lambda(x) = TV(u_0, (-inf, x]).
BVPartition bv_partition(const StepFunction& u0, double support_radius, double delta);

/// Cell averages of u_0 on the partition cells [z_{i-1}, z_i); u_L left of
/// -X and u_R on [X, inf). Jumps weaker than `jump_tol` are dropped.
StepFunction project_restricted(const StepFunction& u0, const BVPartition& partition, double jump_tol = 0.0);

/// Midpoint values of u_0 on a uniform delta-partition of [-X, X].
/// Satisfies the generic initial-data conditions but not the restricted ones.
StepFunction project_uniform(const StepFunction& u0, double support_radius, double delta, double jump_tol = 0.0);

/// Cell averages over I_j = (x_j - dx/2, x_j + dx/2], x_j = j dx, j = first..last.
Eigen::VectorXd project_cells(const StepFunction& u0, double dx, long first, long last);

/// Number of sample points for callable initial data.
inline constexpr int kInitialSamples = 16384;

/// Staircase approximation of a callable u_0 on [-X, X]: midpoint samples of
/// `samples` equal subcells, u_L and u_R outside.
StepFunction sample_staircase(const std::function<double(double)>& u0, double support_radius, double u_left,
                              double u_right, int samples = kInitialSamples);

}  // namespace ftrack
