#include "ftrack/io.hpp"

#include "ftrack/errors.hpp"
#include "ftrack/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace ftrack {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  const auto caret = t.find('^');
  try {
    if (caret != std::string::npos) return std::pow(std::stod(t.substr(0, caret)), std::stod(t.substr(caret + 1)));
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw InvalidInput("trailing characters in number '" + t + "'");
    return v;
  } catch (const std::logic_error&) {
    throw InvalidInput("not a number: '" + t + "'");
  }
}

// Rows "a,b" until a line reading "end".
std::vector<std::pair<std::string, std::string>> read_block(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line == "end") return rows;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidInput("expected 'a,b' row, got '" + line + "'");
    rows.emplace_back(trim(line.substr(0, comma)), trim(line.substr(comma + 1)));
  }
  throw InvalidInput("block not terminated by 'end'");
}

StepFunction staircase_from_rows(const std::vector<std::pair<std::string, std::string>>& rows) {
  if (rows.empty() || rows.front().first != "-inf") throw InvalidInput("staircase must start with a '-inf' row");
  std::vector<double> jumps;
  std::vector<double> values{parse_number(rows.front().second)};
  for (std::size_t i = 1; i < rows.size(); ++i) {
    jumps.push_back(parse_number(rows[i].first));
    values.push_back(parse_number(rows[i].second));
  }
  return StepFunction(std::move(jumps), std::move(values));
}

}  // namespace

void write_staircase(std::ostream& out, const StepFunction& u) {
  out << "position,value\n" << std::setprecision(17);
  out << "-inf," << u.left_value() << '\n';
  for (std::size_t i = 0; i < u.jump_count(); ++i) out << u.jumps()[i] << ',' << u.values()[i + 1] << '\n';
}

StepFunction read_staircase(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line == "position,value") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidInput("expected 'position,value' row, got '" + line + "'");
    rows.emplace_back(trim(line.substr(0, comma)), trim(line.substr(comma + 1)));
  }
  return staircase_from_rows(rows);
}

std::vector<double> parse_list(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::vector<double> out;
  for (const auto& w : words(t)) out.push_back(parse_number(w));
  return out;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw InvalidInput("not a boolean: '" + t + "'");
}

SmoothFlux parse_flux(const std::string& spec, StateInterval states) {
  const auto w = words(spec);
  if (w.empty()) throw InvalidInput("empty flux specification");
  std::vector<double> args;
  for (std::size_t i = 1; i < w.size(); ++i) args.push_back(parse_number(w[i]));
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw InvalidInput("flux '" + w[0] + "' expects " + std::to_string(n) + " parameters");
  };
  if (w[0] == "traffic") {
    need(1);
    return traffic_flux(args[0]);
  }
  if (w[0] == "burgers-concave") {
    need(1);
    return concave_burgers_flux(args[0], states);
  }
  if (w[0] == "exponential") {
    need(2);
    return exponential_flux(args[0], args[1]);
  }
  if (w[0] == "polynomial") {
    if (args.empty() || args.size() > 4) throw InvalidInput("polynomial flux expects 1 to 4 coefficients");
    return polynomial_flux(args, states, "polynomial");
  }
  throw InvalidInput("unknown flux family '" + w[0] + "'");
}

ExperimentConfig read_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> blocks;
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidInput("expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    kv[key] = value;
    const auto w = words(value);
    if (!w.empty() && (w[0] == "table" || w[0] == "staircase")) blocks[key] = read_block(in);
  }
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  ExperimentConfig c = make_experiment(get("experiment") ? *get("experiment") : "traffic-kl-kr");
  if (get("experiment") == nullptr) c.exact = nullptr;
  StateInterval states = c.problem.states();
  if (const auto* v = get("states")) {
    const auto ab = parse_list(*v);
    if (ab.size() != 2 || !(ab[0] < ab[1])) throw InvalidInput("states expects 'lower upper'");
    states = {ab[0], ab[1]};
  }
  auto flux_for = [&](const std::string& key) -> std::optional<SmoothFlux> {
    const auto* v = get(key);
    if (!v) return std::nullopt;
    const auto w = words(*v);
    if (w.empty()) throw InvalidInput(key + " is empty");
    if (w[0] == "table") {
      if (w.size() != 2) throw InvalidInput("table flux expects its curvature bound: 'table D'");
      const auto& rows = blocks.at(key);
      Eigen::VectorXd u(static_cast<Eigen::Index>(rows.size()));
      Eigen::VectorXd q(u.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        u[static_cast<Eigen::Index>(i)] = parse_number(rows[i].first);
        q[static_cast<Eigen::Index>(i)] = parse_number(rows[i].second);
      }
      return table_flux(PiecewiseLinearFlux(u, q), parse_number(w[1]), key);
    }
    return parse_flux(*v, states);
  };
  const auto g = flux_for("left_flux");
  const auto f = flux_for("right_flux");
  if (g || f) {
    if (!g || !f) throw InvalidInput("left_flux and right_flux must be given together");
    c.problem.left_flux = *g;
    c.problem.right_flux = *f;
    c.problem.same_flux = *get("left_flux") == *get("right_flux") && blocks.count("left_flux") == 0;
    c.exact = nullptr;
    if (c.reference == ReferencePolicy::exact) c.reference = ReferencePolicy::automatic;
  }
  if (const auto* v = get("same_flux")) c.problem.same_flux = parse_bool(*v);
  if (const auto* v = get("initial")) {
    const auto w = words(*v);
    if (w.empty()) throw InvalidInput("initial is empty");
    if (w[0] == "staircase") {
      c.problem.initial = staircase_from_rows(blocks.at("initial"));
    } else if (w[0] == "riemann" && (w.size() == 3 || w.size() == 4)) {
      const double x0 = w.size() == 4 ? parse_number(w[3]) : 0.0;
      c.problem.initial = StepFunction({x0}, {parse_number(w[1]), parse_number(w[2])});
    } else {
      throw InvalidInput("initial expects 'staircase' or 'riemann UL UR [x0]'");
    }
    c.exact = nullptr;
    if (c.reference == ReferencePolicy::exact) c.reference = ReferencePolicy::automatic;
  }
  if (const auto* v = get("name")) c.problem.name = *v;
  if (const auto* v = get("X")) c.problem.support_radius = parse_number(*v);
  if (const auto* v = get("T")) c.problem.horizon = parse_number(*v);
  if (const auto* v = get("deltas")) c.deltas = parse_list(*v);
  if (const auto* v = get("restricted")) c.restricted = parse_bool(*v);
  if (const auto* v = get("reference")) c.reference = parse_reference(*v);
  if (const auto* v = get("reference_delta")) c.reference_delta = parse_number(*v);
  if (const auto* v = get("godunov_dx")) c.godunov_dx = parse_number(*v);
  if (const auto* v = get("godunov_lambda")) c.godunov_lambda = parse_number(*v);
  if (const auto* v = get("times")) c.times = parse_list(*v);
  if (const auto* v = get("seed")) c.seed = static_cast<unsigned>(parse_number(*v));
  if (const auto* v = get("out")) c.out_dir = *v;
  if (const auto* v = get("event_log")) c.event_log = parse_bool(*v);
  if (const auto* v = get("max_fronts")) c.max_fronts = static_cast<std::size_t>(parse_number(*v));
  if (const auto* v = get("max_collisions")) c.max_collisions = static_cast<std::size_t>(parse_number(*v));
  if (const auto* v = get("threads")) c.threads = static_cast<unsigned>(parse_number(*v));
  c.validate();
  return c;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  return read_config(in);
}

void write_records_csv(std::ostream& out, const std::vector<ErrorRecord>& records) {
  out << "delta,l1_error,bound_rhs,order_pairwise,runtime_s,front_count\n" << std::setprecision(17);
  for (const auto& r : records) {
    out << r.delta << ',' << r.l1_error << ',' << r.bound_rhs << ',';
    if (r.order_pairwise) out << *r.order_pairwise;
    out << ',' << r.runtime_s << ',' << r.front_count << '\n';
  }
}

void write_gnuplot(std::ostream& out, const std::vector<ErrorRecord>& records) {
  out << "# log10(delta) log10(error) log10(bound)\n" << std::setprecision(17);
  for (const auto& r : records)
    if (r.l1_error > 0.0)
      out << std::log10(r.delta) << ' ' << std::log10(r.l1_error) << ' ' << std::log10(r.bound_rhs) << '\n';
}

}  // namespace ftrack
