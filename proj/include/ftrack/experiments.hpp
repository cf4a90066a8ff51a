#pragma once

#include "ftrack/analysis.hpp"
#include "ftrack/problem.hpp"
#include "ftrack/step_function.hpp"
#include "ftrack/tracker.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ftrack {

enum class ReferencePolicy { fronttracking, godunov, automatic, exact };
enum class BoundKind { automatic, main, bv };

ReferencePolicy parse_reference(const std::string& text);
std::string to_string(ReferencePolicy policy);

struct ExperimentConfig {
  explicit ExperimentConfig(TwoFluxProblem p) : problem(std::move(p)) {}

  TwoFluxProblem problem;
  /// Strictly decreasing.
  std::vector<double> deltas;
  bool restricted = true;
  ReferencePolicy reference = ReferencePolicy::automatic;
  /// Front tracking reference mesh; 0 means deltas.back() / 16.
  double reference_delta = 0.0;
  BoundKind bound = BoundKind::automatic;
  /// Exact solution at time t, when known.
  std::function<LinearProfile(double)> exact;
  std::string out_dir;
  bool event_log = false;
  unsigned seed = 1;
  /// Godunov mesh for single runs; 0 picks deltas.back() / 4.
  double godunov_dx = 0.0;
  /// Overrides dt/dx for Godunov runs when positive.
  double godunov_lambda = 0.0;
  /// Output times for single runs; empty means {T}.
  std::vector<double> times;
  std::size_t max_fronts = 1'000'000;
  std::size_t max_collisions = 10'000'000;
  /// Worker threads for studies; 0 uses the hardware concurrency.
  unsigned threads = 0;

  /// Throws InvalidInput on an inconsistent configuration.
  void validate() const;
};

std::vector<std::string> experiment_names();
ExperimentConfig make_experiment(const std::string& name);

/// Breakpoint options used throughout: uniform spacing delta plus the
/// interior critical points of both fluxes and the far-field states.
BreakpointOptions breakpoint_options(const TwoFluxProblem& problem, double delta);
/// Front tracking initial data at mesh delta.
StepFunction initial_data(const TwoFluxProblem& problem, double delta, bool restricted);

struct StudyResult {
  std::vector<ErrorRecord> records;
  std::optional<RateFit> fit;
  BoundConstants constants;
  BoundKind bound = BoundKind::main;
  std::string reference;
  double reference_runtime_s = 0.0;
  std::vector<std::string> notes;
};

StudyResult run_convergence_study(const ExperimentConfig& config);
std::string summarize(const ExperimentConfig& config, const StudyResult& result);

enum class SolverMode { tracking, godunov };

struct Snapshot {
  double time = 0.0;
  StepFunction solution;
};

struct SingleRun {
  std::vector<Snapshot> snapshots;
  std::vector<CollisionRecord> events;
  std::vector<TraceRecord> traces;
};

/// Runs one solver at mesh deltas.back() and records snapshots at config.times.
SingleRun run_single(const ExperimentConfig& config, SolverMode mode);

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<PropertyResult> results;
  bool all_pass() const;
};

/// Invariant batteries on the configured problem at mesh deltas.back().
SuiteReport run_property_suite(const ExperimentConfig& config);

}  // namespace ftrack
