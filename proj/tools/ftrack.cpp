// Command-line driver: convergence studies, single runs, property suites and
// Riemann queries.

#include "ftrack/errors.hpp"
#include "ftrack/experiments.hpp"
#include "ftrack/io.hpp"
#include "ftrack/riemann.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

namespace {

struct Common {
  std::string experiment = "traffic-kl-kr";
  std::string config;
  std::string deltas;
  double tfinal = 0.0;
  std::string restricted;
  std::string reference;
  std::string out;
  std::string event_log;
  std::string suite;
  unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c) {
  auto* exp = app->add_option("--experiment", c.experiment, "built-in experiment name");
  auto* cfg = app->add_option("--config", c.config, "plain-text config file");
  exp->excludes(cfg);
  app->add_option("--deltas", c.deltas, "comma-separated, strictly decreasing deltas (2^-k accepted)");
  app->add_option("--tfinal", c.tfinal, "final time T");
  app->add_option("--restricted-init", c.restricted, "use the restricted initial-data construction (true/false)");
  app->add_option("--reference", c.reference, "fronttracking | godunov | auto | exact");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--event-log", c.event_log, "keep a collision log (true/false)");
  app->add_option("--suite", c.suite, "also run the property suite (true/false)");
  app->add_option("--threads", c.threads, "worker threads for studies (0 = all cores)");
}

ftrack::ExperimentConfig build(const Common& c) {
  ftrack::ExperimentConfig cfg =
      c.config.empty() ? ftrack::make_experiment(c.experiment) : ftrack::read_config_file(c.config);
  if (!c.deltas.empty()) cfg.deltas = ftrack::parse_list(c.deltas);
  if (c.tfinal > 0.0) cfg.problem.horizon = c.tfinal;
  if (!c.restricted.empty()) cfg.restricted = ftrack::parse_bool(c.restricted);
  if (!c.reference.empty()) cfg.reference = ftrack::parse_reference(c.reference);
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (!c.event_log.empty()) cfg.event_log = ftrack::parse_bool(c.event_log);
  if (c.threads > 0) cfg.threads = c.threads;
  cfg.validate();
  return cfg;
}

int print_suite(const ftrack::SuiteReport& report) {
  for (const auto& r : report.results)
    std::cout << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(26) << r.name << r.detail << "\n";
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Front tracking and Godunov solvers for conservation laws with a flux discontinuity"};
  app.require_subcommand(1);

  Common study_opts, run_opts, suite_opts;
  auto* study = app.add_subcommand("study", "convergence study over the delta list");
  add_common(study, study_opts);

  auto* run = app.add_subcommand("run", "single solver run with snapshots");
  add_common(run, run_opts);
  std::string mode = "tracking";
  std::string times;
  run->add_option("--mode", mode, "tracking | godunov")->check(CLI::IsMember({"tracking", "godunov"}));
  run->add_option("--times", times, "comma-separated output times");

  auto* suite = app.add_subcommand("suite", "invariant batteries");
  add_common(suite, suite_opts);

  auto* riemann = app.add_subcommand("riemann", "single interface Riemann query");
  std::string left = "traffic 1", right = "traffic 2";
  double ul = 0.5, ur = 0.5, delta = 0.125;
  riemann->add_option("--left-flux", left, "flux for x < 0, e.g. 'traffic 1'");
  riemann->add_option("--right-flux", right, "flux for x > 0");
  riemann->add_option("--ul", ul, "left state")->required();
  riemann->add_option("--ur", ur, "right state")->required();
  riemann->add_option("--delta", delta, "breakpoint spacing");

  app.add_subcommand("list", "list built-in experiments");

  CLI11_PARSE(app, argc, argv);
  try {
    if (app.got_subcommand("list")) {
      for (const auto& name : ftrack::experiment_names()) std::cout << name << "\n";
      return 0;
    }
    if (app.got_subcommand("study")) {
      const auto cfg = build(study_opts);
      const auto result = ftrack::run_convergence_study(cfg);
      std::cout << ftrack::summarize(cfg, result);
      if (!study_opts.suite.empty() && ftrack::parse_bool(study_opts.suite))
        return print_suite(ftrack::run_property_suite(cfg));
      return 0;
    }
    if (app.got_subcommand("run")) {
      auto cfg = build(run_opts);
      if (!times.empty()) cfg.times = ftrack::parse_list(times);
      cfg.validate();
      const auto result =
          ftrack::run_single(cfg, mode == "godunov" ? ftrack::SolverMode::godunov : ftrack::SolverMode::tracking);
      for (const auto& s : result.snapshots) {
        std::cout << "# t = " << s.time << "\n";
        ftrack::write_staircase(std::cout, s.solution);
      }
      for (const auto& e : result.events) std::cout << ftrack::format_record(e) << "\n";
      return 0;
    }
    if (app.got_subcommand("suite")) return print_suite(ftrack::run_property_suite(build(suite_opts)));
    if (app.got_subcommand("riemann")) {
      const auto g = ftrack::parse_flux(left);
      const auto f = ftrack::parse_flux(right);
      std::vector<double> extra{ul, ur};
      for (const auto* q : {&g, &f})
        if (q->critical_points()) extra.insert(extra.end(), q->critical_points()->begin(), q->critical_points()->end());
      const auto bp = ftrack::uniform_breakpoints(g.domain(), delta, extra);
      const auto gd = ftrack::interpolate(g, bp);
      const auto fd = ftrack::interpolate(f, bp);
      const auto sol = ftrack::solve_interface(gd, fd, ul, ur);
      std::cout << std::setprecision(12) << "u_minus,u_plus,flux_level\n"
                << sol.trace.u_minus << ',' << sol.trace.u_plus << ',' << sol.trace.flux_level << "\n"
                << "left fan\n" << ftrack::describe(sol.left) << "right fan\n" << ftrack::describe(sol.right);
      if (sol.tie_break) std::cout << "note: minimal-jump tie-break among " << sol.admissible.size() << " pairs\n";
      return 0;
    }
  } catch (const ftrack::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
