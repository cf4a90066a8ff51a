#include "ftrack/experiments.hpp"

#include "ftrack/discretize.hpp"
#include "ftrack/errors.hpp"
#include "ftrack/godunov.hpp"
#include "ftrack/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

namespace ftrack {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

TrackerOptions tracker_options(const ExperimentConfig& config) {
  TrackerOptions opts;
  opts.max_fronts = config.max_fronts;
  opts.max_collisions = config.max_collisions;
  return opts;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

TwoFluxProblem riemann_problem(std::string name, SmoothFlux g, SmoothFlux f, double ul, double ur, bool same) {
  TwoFluxProblem p{std::move(name), std::move(g), std::move(f), StepFunction({0.0}, {ul, ur}), 1.0, 0.5, same};
  return p;
}

std::vector<double> dyadic(int from, int to) {
  std::vector<double> d;
  for (int k = from; k <= to; ++k) d.push_back(std::ldexp(1.0, -k));
  return d;
}

}  // namespace

ReferencePolicy parse_reference(const std::string& text) {
  if (text == "fronttracking") return ReferencePolicy::fronttracking;
  if (text == "godunov") return ReferencePolicy::godunov;
  if (text == "auto") return ReferencePolicy::automatic;
  if (text == "exact") return ReferencePolicy::exact;
  throw InvalidInput("unknown reference policy '" + text + "'");
}

std::string to_string(ReferencePolicy policy) {
  switch (policy) {
    case ReferencePolicy::fronttracking: return "fronttracking";
    case ReferencePolicy::godunov: return "godunov";
    case ReferencePolicy::automatic: return "auto";
    case ReferencePolicy::exact: return "exact";
  }
  return "auto";
}

void ExperimentConfig::validate() const {
  problem.validate();
  if (!(problem.horizon > 0.0)) throw InvalidInput("T must be positive");
  if (deltas.empty()) throw InvalidInput("delta list is empty");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw InvalidInput("deltas must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw InvalidInput("deltas must be strictly decreasing");
  }
  if (reference == ReferencePolicy::exact && !exact) throw InvalidInput("exact reference requested but not available");
  for (double t : times)
    if (t < 0.0 || t > problem.horizon) throw InvalidInput("output times must lie in [0, T]");
}

std::vector<std::string> experiment_names() {
  return {"traffic-kl-kr", "monotone-exp", "classical-equal-flux", "crossing-demo"};
}

ExperimentConfig make_experiment(const std::string& name) {
  ExperimentConfig c(riemann_problem(name, traffic_flux(1.0), traffic_flux(1.0), 0.0, 0.0, true));
  if (name == "traffic-kl-kr") {
    c.problem = riemann_problem(name, traffic_flux(1.0), traffic_flux(2.0), 0.9, 0.1, false);
    c.deltas = dyadic(3, 8);
    c.reference = ReferencePolicy::fronttracking;
    c.reference_delta = std::ldexp(1.0, -12);
    c.bound = BoundKind::main;
  } else if (name == "monotone-exp") {
    c.problem = riemann_problem(name, exponential_flux(1.0, 2.0), exponential_flux(1.0, 1.0), 0.1, 0.9, false);
    c.deltas = dyadic(3, 8);
    c.reference = ReferencePolicy::fronttracking;
    c.reference_delta = std::ldexp(1.0, -12);
    c.bound = BoundKind::bv;
  } else if (name == "classical-equal-flux") {
    c.problem = riemann_problem(name, traffic_flux(1.0), traffic_flux(1.0), 1.0, 0.0, true);
    c.deltas = dyadic(3, 8);
    c.reference = ReferencePolicy::exact;
    c.exact = [](double t) { return exact_quadratic_riemann(1.0, 1.0, 0.0, t); };
    c.bound = BoundKind::bv;
  } else if (name == "crossing-demo") {
    const double coeffs[] = {0.0, 0.5, 0.5, -1.0};
    c.problem = riemann_problem(name, polynomial_flux(coeffs, {0.0, 1.0}, "u(1-u)(u+0.5)"), traffic_flux(1.0), 0.2,
                                0.8, false);
    c.deltas = dyadic(3, 7);
    c.reference = ReferencePolicy::fronttracking;
    c.reference_delta = std::ldexp(1.0, -11);
    c.bound = BoundKind::main;
  } else {
    throw InvalidInput("unknown experiment '" + name + "'");
  }
  return c;
}

BreakpointOptions breakpoint_options(const TwoFluxProblem& problem, double delta) {
  return BreakpointOptions{delta, true, {problem.u_left(), problem.u_right()}};
}

StepFunction initial_data(const TwoFluxProblem& problem, double delta, bool restricted) {
  const double tol = 1e-13 * problem.states().width();
  if (restricted)
    return project_restricted(problem.initial, bv_partition(problem.initial, problem.support_radius, delta), tol);
  return project_uniform(problem.initial, problem.support_radius, delta, tol);
}

namespace {

struct Reference {
  std::function<double(const StepFunction&)> distance;
  std::string label;
};

Reference tracking_reference(const ExperimentConfig& config, double delta) {
  const TwoFluxProblem& p = config.problem;
  const DiscreteFluxes fluxes = discretize_fluxes(p, breakpoint_options(p, delta));
  auto sol = std::make_shared<StepFunction>(
      track(fluxes, initial_data(p, delta, true), p.horizon, tracker_options(config)));
  return {[sol](const StepFunction& u) { return l1_distance(u, *sol); },
          "front tracking at delta=" + fmt(delta)};
}

Reference godunov_reference(const ExperimentConfig& config, double smallest_error) {
  const TwoFluxProblem& p = config.problem;
  GodunovOptions opts;
  opts.lambda = config.godunov_lambda;
  std::vector<StepFunction> levels;
  std::vector<double> dist;
  double dx = std::ldexp(1.0, -8);
  std::string note;
  for (int level = 0; level < 6; ++level, dx *= 0.5) {
    levels.push_back(profile(run_godunov(p.left_flux, p.right_flux, p.initial, p.support_radius, p.horizon, dx, opts)));
    if (levels.size() >= 2) dist.push_back(l1_distance(levels[levels.size() - 1], levels[levels.size() - 2]));
    if (dist.size() >= 2) {
      const double d12 = dist[dist.size() - 2];
      const double d23 = dist.back();
      const double order = std::log2(d12 / d23);
      const double estimate = order > 0.0 ? d23 / (std::exp2(order) - 1.0) : d12;
      note = "Godunov at dx=" + fmt(dx) + ", estimated oracle error " + fmt(estimate);
      if (estimate < 0.1 * smallest_error) break;
    }
  }
  auto sol = std::make_shared<StepFunction>(levels.back());
  return {[sol](const StepFunction& u) { return l1_distance(u, *sol); }, note};
}

}  // namespace

StudyResult run_convergence_study(const ExperimentConfig& config) {
  config.validate();
  const TwoFluxProblem& problem = config.problem;
  StudyResult result;
  result.constants = bound_constants(problem);
  result.bound = config.bound;
  if (result.bound == BoundKind::automatic) result.bound = result.constants.K3 ? BoundKind::bv : BoundKind::main;

  const std::size_t n = config.deltas.size();
  std::vector<StepFunction> solutions(n);
  std::vector<ErrorRecord> records(n);
  std::vector<double> init_l1(n, 0.0);
  parallel_for(n, config.threads, [&](std::size_t i) {
    const double delta = config.deltas[i];
    ErrorRecord& rec = records[i];
    rec.delta = delta;
    const auto start = std::chrono::steady_clock::now();
    try {
      const DiscreteFluxes fluxes = discretize_fluxes(problem, breakpoint_options(problem, delta));
      const StepFunction u0d = initial_data(problem, delta, config.restricted);
      init_l1[i] = l1_distance(problem.initial, u0d);
      FrontTrackingState state(fluxes, u0d, tracker_options(config));
      state.advance(problem.horizon);
      solutions[i] = state.snapshot();
      rec.front_count = state.max_front_count();
    } catch (const Error& e) {
      rec.l1_error = std::nan("");
      rec.note = e.what();
    }
    rec.runtime_s = seconds_since(start);
  });

  ReferencePolicy policy = config.reference;
  if (policy == ReferencePolicy::automatic)
    policy = config.exact ? ReferencePolicy::exact : ReferencePolicy::fronttracking;
  const auto ref_start = std::chrono::steady_clock::now();
  Reference ref;
  if (policy == ReferencePolicy::exact) {
    const LinearProfile exact = config.exact(problem.horizon);
    ref = {[exact](const StepFunction& u) { return l1_distance(u, exact); }, "exact solution"};
  } else if (policy == ReferencePolicy::fronttracking) {
    const double d = config.reference_delta > 0.0 ? config.reference_delta : config.deltas.back() / 16.0;
    ref = tracking_reference(config, d);
  } else {
    // Calibrate against the coarse errors measured with a tracking reference.
    Reference rough = tracking_reference(config, config.deltas.back() / 16.0);
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      if (records[i].note.empty()) smallest = std::min(smallest, rough.distance(solutions[i]));
    ref = godunov_reference(config, smallest);
  }
  result.reference = ref.label;
  result.reference_runtime_s = seconds_since(ref_start);

  for (std::size_t i = 0; i < n; ++i) {
    ErrorRecord& rec = records[i];
    if (!rec.note.empty()) {
      result.notes.push_back("delta=" + fmt(rec.delta) + ": " + rec.note);
      continue;
    }
    rec.l1_error = ref.distance(solutions[i]);
    rec.bound_rhs = result.bound == BoundKind::bv
                        ? bv_bound_rhs(result.constants, rec.delta, config.restricted, init_l1[i])
                        : main_bound_rhs(result.constants, rec.delta, config.restricted, init_l1[i]);
  }
  result.records = records;
  try {
    result.fit = fit_rate(result.records);
    result.notes.insert(result.notes.end(), result.fit->notes.begin(), result.fit->notes.end());
  } catch (const Error& e) {
    result.notes.push_back(std::string("rate fit unavailable: ") + e.what());
  }

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    const std::string stem = config.out_dir + "/" + problem.name;
    std::ofstream csv(stem + "_study.csv");
    write_records_csv(csv, result.records);
    std::ofstream dat(stem + "_study.dat");
    write_gnuplot(dat, result.records);
    std::ofstream txt(stem + "_summary.txt");
    txt << summarize(config, result);
  }
  return result;
}

std::string summarize(const ExperimentConfig& config, const StudyResult& result) {
  std::ostringstream out;
  out << "experiment: " << config.problem.name << "\n"
      << "reference: " << result.reference << "\n"
      << "bound: " << (result.bound == BoundKind::bv ? "first-order (BV)" : "main (rate 1/2)") << "\n"
      << "constants: Y=" << fmt(result.constants.Y) << " C1=" << fmt(result.constants.C1)
      << " K1=" << fmt(result.constants.K1) << " K2=" << fmt(result.constants.K2);
  if (result.constants.K3) out << " K3=" << fmt(*result.constants.K3);
  out << "\n";
  out << std::setw(14) << "delta" << std::setw(16) << "l1_error" << std::setw(16) << "bound_rhs" << std::setw(10)
      << "order" << std::setw(12) << "runtime_s" << std::setw(10) << "fronts" << "\n";
  for (const auto& r : result.records) {
    out << std::setw(14) << fmt(r.delta) << std::setw(16) << fmt(r.l1_error) << std::setw(16) << fmt(r.bound_rhs)
        << std::setw(10) << (r.order_pairwise ? fmt(*r.order_pairwise) : std::string("-")) << std::setw(12)
        << fmt(r.runtime_s) << std::setw(10) << r.front_count << "\n";
  }
  if (result.fit) out << "fitted rate: " << fmt(result.fit->slope) << "\n";
  for (const auto& note : result.notes) out << "note: " << note << "\n";
  return out.str();
}

SingleRun run_single(const ExperimentConfig& config, SolverMode mode) {
  config.validate();
  const TwoFluxProblem& p = config.problem;
  std::vector<double> times = config.times.empty() ? std::vector<double>{p.horizon} : config.times;
  std::sort(times.begin(), times.end());
  const double delta = config.deltas.back();
  SingleRun run;
  if (mode == SolverMode::tracking) {
    TrackerOptions opts = tracker_options(config);
    opts.event_log = config.event_log;
    FrontTrackingState state(discretize_fluxes(p, breakpoint_options(p, delta)),
                             initial_data(p, delta, config.restricted), opts);
    for (double t : times) {
      state.advance(t);
      run.snapshots.push_back({t, state.snapshot()});
    }
    run.events = state.event_log();
    run.traces = state.interface_traces();
  } else {
    const double dx = config.godunov_dx > 0.0 ? config.godunov_dx : delta / 4.0;
    GodunovOptions opts;
    opts.lambda = config.godunov_lambda;
    double dt = opts.lambda > 0.0 ? opts.lambda * dx : dx / (2.0 * p.max_lipschitz());
    std::size_t next = 0;
    // Row n holds the solution on [n dt, (n + 1) dt).
    auto emit = [&](const GodunovGrid& grid) {
      while (next < times.size() && times[next] < grid.time() + dt) {
        if (times[next] >= grid.time()) run.snapshots.push_back({times[next], profile(grid)});
        ++next;
      }
    };
    opts.observer = emit;
    GodunovGrid initial = make_grid(p.initial, dx, dt, 0, p.support_radius);
    emit(initial);
    run_godunov(p.left_flux, p.right_flux, p.initial, p.support_radius, times.back(), dx, opts);
  }
  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    const std::string stem = config.out_dir + "/" + p.name + (mode == SolverMode::tracking ? "_tracking" : "_godunov");
    for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
      std::ofstream out(stem + "_t" + std::to_string(i) + ".csv");
      write_staircase(out, run.snapshots[i].solution);
    }
    if (config.event_log) {
      std::ofstream log(stem + "_events.log");
      for (const auto& e : run.events) log << format_record(e) << "\n";
    }
  }
  return run;
}

bool SuiteReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.pass; });
}

SuiteReport run_property_suite(const ExperimentConfig& config) {
  config.validate();
  const TwoFluxProblem& p = config.problem;
  const double delta = config.deltas.back();
  const double T = p.horizon;
  const DiscreteFluxes fluxes = discretize_fluxes(p, breakpoint_options(p, delta));
  const StepFunction u0d = initial_data(p, delta, config.restricted);
  const StateInterval dom = p.states();
  SuiteReport report;
  auto add = [&](std::string name, bool pass, std::string detail) {
    report.results.push_back({std::move(name), pass, std::move(detail)});
  };

  // Tracker batteries, checked at several times.
  const BoundConstants bc = bound_constants(p);
  FrontTrackingState state(fluxes, u0d, tracker_options(config));
  const double flux_out = fluxes.left(p.u_left()) - fluxes.right(p.u_right());
  const double mass_scale = std::max(1.0, T * (fluxes.left.sup_norm() + fluxes.right.sup_norm()));
  double worst_mass = 0.0;
  double worst_support = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const double t = T * k / 8.0;
    state.advance(t);
    const StepFunction u = state.snapshot();
    worst_mass = std::max(worst_mass, std::abs(integral_difference(u, u0d) - t * flux_out) / mass_scale);
    for (double x : u.jumps()) worst_support = std::max(worst_support, std::abs(x));
  }
  add("rankine-hugoniot", state.max_rankine_hugoniot_defect() <= kRankineHugoniotTolerance,
      "max relative defect " + fmt(state.max_rankine_hugoniot_defect()));
  const double slack = 1e-12 * dom.width();
  add("invariant-region", state.min_state() >= dom.lower - slack && state.max_state() <= dom.upper + slack,
      "states in [" + fmt(state.min_state()) + ", " + fmt(state.max_state()) + "]");
  add("mass-balance", worst_mass <= 1e-10, "max scaled defect " + fmt(worst_mass));
  add("support", worst_support <= bc.Y, "max |x| " + fmt(worst_support) + " vs Y " + fmt(bc.Y));
  std::size_t gamma_fail = 0;
  for (const auto& tr : state.interface_traces())
    if (!gamma_check(fluxes.left, fluxes.right, tr.pair.u_minus, tr.pair.u_plus).pass) ++gamma_fail;
  add("gamma-condition", gamma_fail == 0,
      std::to_string(state.interface_traces().size()) + " trace pairs, " + std::to_string(gamma_fail) + " failing");
  try {
    state.check_invariants();
    add("front-invariants", true, std::to_string(state.collision_count()) + " collisions");
  } catch (const Error& e) {
    add("front-invariants", false, e.what());
  }

  // L1 contraction against perturbed data.
  {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> bump(-0.1 * dom.width(), 0.1 * dom.width());
    // Perturb every interval inside [-X/2, X/2).
    const double X = p.support_radius;
    std::vector<double> jumps = u0d.jumps();
    jumps.push_back(-0.5 * X);
    jumps.push_back(0.5 * X);
    std::sort(jumps.begin(), jumps.end());
    jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
    std::vector<double> values{u0d.left_value()};
    for (std::size_t i = 0; i + 1 < jumps.size(); ++i) {
      const double mid = 0.5 * (jumps[i] + jumps[i + 1]);
      double v = u0d(mid);
      if (mid > -0.5 * X && mid < 0.5 * X) v = std::clamp(v + bump(rng), dom.lower, dom.upper);
      values.push_back(v);
    }
    values.push_back(u0d.right_value());
    const StepFunction v0 = StepFunction::from_breaks(jumps, values);
    FrontTrackingState a(fluxes, u0d, tracker_options(config));
    FrontTrackingState b(fluxes, v0, tracker_options(config));
    const double initial = l1_distance(u0d, v0);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 4; ++k) {
      const double t = T * k / 4.0;
      a.advance(t);
      b.advance(t);
      worst = std::max(worst, l1_distance(a.snapshot(), b.snapshot()) - initial);
    }
    add("l1-contraction", worst <= 1e-12 * std::max(1.0, initial),
        "initial distance " + fmt(initial) + ", max growth " + fmt(worst));
  }

  // Time-slice hat inequality between meshes delta and delta / 2.
  {
    const double d2 = 0.5 * delta;
    const DiscreteFluxes fine = discretize_fluxes(p, breakpoint_options(p, d2));
    const StepFunction u0f = initial_data(p, d2, true);
    const StepFunction u0c = initial_data(p, delta, true);
    FrontTrackingState a(fluxes, u0c, tracker_options(config));
    FrontTrackingState b(fine, u0f, tracker_options(config));
    const double h0 = linf_hat_distance(u0c, u0f, p.u_left());
    const double gap = std::max(sup_gap(fluxes.right, fine.right), sup_gap(fluxes.left, fine.left));
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 4; ++k) {
      const double t = T * k / 4.0;
      a.advance(t);
      b.advance(t);
      worst = std::max(worst, linf_hat_distance(a.snapshot(), b.snapshot(), p.u_left()) - (h0 + t * gap));
    }
    add("hat-time-slice", worst <= 1e-12, "max excess " + fmt(worst));
  }

  // Godunov pair: smooth fluxes against the interpolants, every step.
  {
    const double dx = config.godunov_dx > 0.0 ? config.godunov_dx : delta / 4.0;
    const double max_l = p.max_lipschitz();
    const double lambda = config.godunov_lambda > 0.0 ? config.godunov_lambda : 1.0 / (2.0 * max_l);
    const double dt = lambda * dx;
    const long steps = step_count(T, dt);
    GodunovGrid smooth = make_grid(p.initial, dx, dt, steps, p.support_radius);
    GodunovGrid disc = make_grid(u0d, dx, dt, steps, p.support_radius);
    const double gap = std::max(sup_gap(p.right_flux, fluxes.right), sup_gap(p.left_flux, fluxes.left));
    const double mass_out = dt * (p.left_flux(p.u_left()) - p.right_flux(p.u_right()));
    const double mass_unit = dt * std::max(1e-300, p.left_flux.sup_norm() + p.right_flux.sup_norm());
    double hat_prev = (smooth.hat - disc.hat).cwiseAbs().maxCoeff();
    double worst_step = -std::numeric_limits<double>::infinity();
    double worst_mass_step = 0.0;
    double worst_local = -std::numeric_limits<double>::infinity();
    std::size_t monotone_fail = 0;
    for (long n = 0; n < steps; ++n) {
      const Eigen::VectorXd before = smooth.cells;
      step(smooth, p.left_flux, p.right_flux);
      step(disc, fluxes.left, fluxes.right);
      const double change = dx * (smooth.cells - before).sum();
      worst_mass_step = std::max(worst_mass_step, std::abs(change - mass_out) / mass_unit);
      const double hat_now = (smooth.hat - disc.hat).cwiseAbs().maxCoeff();
      worst_step = std::max(worst_step, hat_now - (hat_prev + dt * gap));
      hat_prev = hat_now;
      for (double r : {0.25, 0.5, 1.0}) {
        const double lv = local_variation(smooth.cells, smooth.first, dx, r, smooth.u_left, smooth.u_right);
        worst_local = std::max(worst_local, lv - local_bv_bound(bc, r));
      }
      for (Eigen::Index k = 0; k < smooth.cells.size(); ++k)
        if (smooth.cells[k] < dom.lower - slack || smooth.cells[k] > dom.upper + slack) ++monotone_fail;
    }
    add("godunov-hat-step", worst_step <= 1e-12, "max per-step excess " + fmt(worst_step));
    add("godunov-mass-balance", worst_mass_step <= 1e-12, "max relative defect " + fmt(worst_mass_step));
    add("godunov-local-bv", worst_local < 0.0, "max excess over TV + 4 K1 / r " + fmt(worst_local));
    add("godunov-invariant-region", monotone_fail == 0, std::to_string(monotone_fail) + " cells outside");
  }
  return report;
}

}  // namespace ftrack
