#pragma once

#include "ftrack/analysis.hpp"
#include "ftrack/flux.hpp"
#include "ftrack/step_function.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ftrack {

struct ExperimentConfig;

/// Staircase CSV: header "position,value", a first row "-inf,u_L", then one
/// row per jump with the value to its right.
void write_staircase(std::ostream& out, const StepFunction& u);
StepFunction read_staircase(std::istream& in);

/// Parses "a,b,c" or "a b c"; also accepts powers such as 2^-3.
std::vector<double> parse_list(const std::string& text);
bool parse_bool(const std::string& text);

/// Builds a flux from "traffic K", "burgers-concave S", "exponential A B",
/// "polynomial c0 c1 c2 c3"; `states` applies to the last two families.
SmoothFlux parse_flux(const std::string& spec, StateInterval states = {0.0, 1.0});

/// Plain-text key = value configuration; see the README for the keys.
ExperimentConfig read_config(std::istream& in);
ExperimentConfig read_config_file(const std::string& path);

/// delta,l1_error,bound_rhs,order_pairwise,runtime_s,front_count
void write_records_csv(std::ostream& out, const std::vector<ErrorRecord>& records);
/// log10(delta) log10(error) log10(bound)
void write_gnuplot(std::ostream& out, const std::vector<ErrorRecord>& records);

}  // namespace ftrack
