// optimizer.hpp: efficiency maximization over dephasing rates, and parameter sweeps

#pragma once

#include "fmo/model.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fmo {

// (γ1 … γ7, Γ8), ps^-1
using RateVector = std::array<double, 8>;

// Local dephasing from the first seven entries, sink from the last, every Γ_j
// set to pinned_dissipation, no non-local terms.
DecoherenceSpec unpack_rates(const RateVector& rates, double pinned_dissipation = kPinnedDissipation);
RateVector pack_rates(const DecoherenceSpec& spec);

// Mean-field transfer efficiency at config.horizon for the unpacked rates.
// config.theory is ignored. Throws DomainError on negative entries.
double objective(const RateVector& rates, const RunConfig& config, const SiteNetwork& h,
                 double pinned_dissipation = kPinnedDissipation);

struct OptimizerOptions {
    int starts = 5;
    std::uint64_t seed = 20120601;
    int max_evaluations = 2000;  // per start
    double pinned_dissipation = kPinnedDissipation;
    // Search evaluations skip the step/2 rerun and may use a coarser step;
    // the returned optimum is re-simulated at config.step with the guard.
    bool guard_during_search = false;
    double search_step = 0.005;    // ps; <= 0 means config.step
    double f_tolerance = 1e-7;     // efficiency spread across the simplex
    double x_tolerance = 1e-5;     // in √rate coordinates
};

struct TraceEntry {
    int evaluation = 0;  // global evaluation counter, 1-based
    RateVector rates{};
    double efficiency = 0.0;
};

struct StartSummary {
    RateVector start{};
    RateVector best{};
    double efficiency = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct OptimizationResult {
    DecoherenceSpec best_rates;
    RateVector best_vector{};
    double best_efficiency = 0.0;
    int evaluations = 0;
    bool converged = false;  // true if the winning start's simplex converged
    std::vector<TraceEntry> trace;  // strictly improving global-best steps
    std::vector<StartSummary> starts;
};

// Multi-start simplex search with rates parametrized as x², deterministic for a seed.
OptimizationResult optimize_dephasing(const RunConfig& config, const SiteNetwork& h,
                                      const OptimizerOptions& options = {});

// Deterministic start points (rate space) used by optimize_dephasing.
std::vector<RateVector> optimizer_starts(int starts, std::uint64_t seed);

// ------------------------------ sweeps ----------------------------------------

// Recognized names: sink, n0, uniform_local_diss, uniform_local_deph,
// uniform_nl_diss, uniform_nl_deph, gamma_diss.K, gamma_deph.K, nl_diss.I.J,
// nl_deph.I.J (1-based; the non-local entries set both (I,J) and (J,I)).
// Several names may be swept together with one shared value.
bool is_sweep_parameter(const std::string& name);

// Applies value to the named parameter. n0 writes config.n0 and requires a positive integer value.
void apply_sweep_value(const std::string& name, double value, DecoherenceSpec& rates, RunConfig& config);

struct SweepRow {
    double value = 0.0;
    double efficiency = 0.0;
};

struct SweepTable {
    std::vector<std::string> parameters;
    std::vector<SweepRow> rows;  // input order

    const SweepRow& best() const;
};

SweepTable sweep(const std::vector<std::string>& parameters, const std::vector<double>& values,
                 const DecoherenceSpec& base_rates, const RunConfig& config, const SiteNetwork& h);

// Inclusive arithmetic range, computed as start + k·step to avoid drift.
std::vector<double> linear_range(double start, double stop, double step);

} // namespace fmo
