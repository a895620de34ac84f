// scenario.hpp: plain-text scenario configs and their CSV/summary outputs
//
// Config format, one assignment per line, '#' starts a comment:
//
//   scenario = simulate | sweep | optimize | oracle | validate
//   theory = semiclassical | meanfield | oracle
//   n0 = 100
//   horizon = 5          # ps
//   step = 0.001         # ps
//   sample_interval = 0.01
//   step_guard = true
//   sink = 0.32
//   gamma_diss.* = 0.0005
//   gamma_deph.5 = 50.6
//   nl_deph.1.7 = 0.74   # sets only the (1,7) entry
//   sweep.parameter = uniform_local_diss, uniform_nl_diss
//   sweep.values = 0, 0.5, 1        (or sweep.start / sweep.stop / sweep.step)
//   optimize.starts = 5
//   optimize.seed = 20120601
//   optimize.max_evaluations = 2000
//   optimize.pinned_dissipation = 0.0005
//   oracle.hopping_scale = 1
//   output = fig3_optimal
//
// Site indices are 1..7. A `*` index assigns all seven sites and is applied
// before any explicit index of the same family.

#pragma once

#include "fmo/model.hpp"
#include "fmo/integrator.hpp"
#include "fmo/optimizer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fmo {

enum class Scenario { simulate, sweep, optimize, oracle, validate };

std::string to_string(Scenario s);

struct SweepSpec {
    std::vector<std::string> parameters;
    std::vector<double> values;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::simulate;
    RunConfig run;
    DecoherenceSpec rates;
    SweepSpec sweep;
    OptimizerOptions optimize;
    double hopping_scale = 1.0;  // oracle only
    std::string output;          // file stem; empty lets the caller choose
};

// Throws ParseError carrying the offending line number.
ScenarioConfig parse_config(const std::string& text);

struct RunOptions {
    std::string out_dir = ".";
    std::string default_stem = "run";
};

struct ScenarioOutcome {
    int exit_status = 0;
    std::string summary;              // also written to <stem>_summary.txt
    std::vector<std::string> files;   // paths written, summary last
};

// Runs the scenario and writes its CSV files. Simulation and optimizer
// errors propagate as exceptions; rate-validation failures come back as a
// nonzero exit status with the violations in the summary.
ScenarioOutcome run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

// 9 significant digits, the CSV number format.
std::string format_number(double v);

std::string trajectory_csv(const Trajectory& traj);
std::string sweep_csv(const SweepTable& table);
std::string trace_csv(const OptimizationResult& result);

} // namespace fmo
