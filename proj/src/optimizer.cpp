#include "fmo/optimizer.hpp"

#include "fmo/errors.hpp"
#include "fmo/meanfield.hpp"
#include "fmo/nelder_mead.hpp"
#include "fmo/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace fmo {

DecoherenceSpec unpack_rates(const RateVector& rates, double pinned_dissipation) {
    DecoherenceSpec spec;
    for (int j = 0; j < kSites; ++j) spec.gamma_deph(j) = rates[j];
    spec.gamma_diss.setConstant(pinned_dissipation);
    spec.sink = rates[7];
    return spec;
}

RateVector pack_rates(const DecoherenceSpec& spec) {
    RateVector v{};
    for (int j = 0; j < kSites; ++j) v[j] = spec.gamma_deph(j);
    v[7] = spec.sink;
    return v;
}

double objective(const RateVector& rates, const RunConfig& config, const SiteNetwork& h,
                 double pinned_dissipation) {
    for (double r : rates) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("objective: rates must be finite and >= 0");
    }
    RunConfig mf = config;
    mf.theory = Theory::meanfield;
    return simulate_meanfield(mf, h, unpack_rates(rates, pinned_dissipation)).final_efficiency;
}

namespace {

// Portable uniform in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

std::vector<RateVector> optimizer_starts(int starts, std::uint64_t seed) {
    if (starts < 1) throw DomainError("optimize_dephasing: starts must be >= 1");
    std::vector<RateVector> out;
    for (int k = 0; k < starts; ++k) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
        // Dephasing scales log-spaced over 0.1 … ~30 ps^-1, sink over 0.1 … 1 ps^-1.
        const double frac = starts == 1 ? 0.5 : static_cast<double>(k) / (starts - 1);
        const double deph_scale = std::pow(10.0, -1.0 + 2.5 * frac);
        const double sink_scale = std::pow(10.0, -1.0 + frac);
        RateVector r{};
        for (int j = 0; j < kSites; ++j) r[j] = deph_scale * (0.5 + unit_uniform(rng));
        r[7] = sink_scale * (0.5 + unit_uniform(rng));
        out.push_back(r);
    }
    return out;
}

OptimizationResult optimize_dephasing(const RunConfig& config, const SiteNetwork& h,
                                      const OptimizerOptions& options) {
    config.check();
    RunConfig search = config;
    search.theory = Theory::meanfield;
    search.step_guard = options.guard_during_search;
    if (options.search_step > 0.0) {
        search.step = std::min(options.search_step, config.horizon);
        search.sample_interval = std::max(search.sample_interval, search.step);
    }

    OptimizationResult result;
    result.best_efficiency = -std::numeric_limits<double>::infinity();
    int global_evals = 0;

    auto to_rates = [](const std::vector<double>& x) {
        RateVector r{};
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] * x[i];
        return r;
    };

    for (const RateVector& start : optimizer_starts(options.starts, options.seed)) {
        std::vector<double> x0(start.size()), steps(start.size());
        for (std::size_t i = 0; i < start.size(); ++i) {
            x0[i] = std::sqrt(start[i]);
            steps[i] = std::max(0.3 * x0[i], 0.1);
        }
        auto f = [&](const std::vector<double>& x) {
            const RateVector r = to_rates(x);
            ++global_evals;
            double eff;
            try {
                eff = objective(r, search, h, options.pinned_dissipation);
            } catch (const NumericalError&) {
                // Rates too large for the explicit step: treat as the worst point.
                return std::numeric_limits<double>::infinity();
            } catch (const ConsistencyError&) {
                return std::numeric_limits<double>::infinity();
            }
            if (eff > result.best_efficiency) {
                result.best_efficiency = eff;
                result.best_vector = r;
                result.trace.push_back({global_evals, r, eff});
            }
            return -eff;
        };
        SimplexOptions sopt;
        sopt.max_evaluations = options.max_evaluations;
        sopt.f_tolerance = options.f_tolerance;
        sopt.x_tolerance = options.x_tolerance;
        const SimplexResult sr = nelder_mead_minimize(f, x0, steps, sopt);

        StartSummary summary;
        summary.start = start;
        summary.best = to_rates(sr.x);
        summary.efficiency = -sr.value;
        summary.evaluations = sr.evaluations;
        summary.converged = sr.converged;
        if (summary.best == result.best_vector) result.converged = sr.converged;
        result.starts.push_back(summary);
    }

    result.evaluations = global_evals;
    result.best_rates = unpack_rates(result.best_vector, options.pinned_dissipation);
    // Re-simulate the winner with the caller's guard setting; the primary run is the same path.
    RunConfig verify = config;
    verify.theory = Theory::meanfield;
    result.best_efficiency = simulate_meanfield(verify, h, result.best_rates).final_efficiency;
    return result;
}

// ------------------------------ sweeps ----------------------------------------

namespace {

struct ParsedName {
    enum class Kind { sink, n0, uniform_local_diss, uniform_local_deph, uniform_nl_diss, uniform_nl_deph,
                      gamma_diss, gamma_deph, nl_diss, nl_deph } kind;
    int i = -1;
    int j = -1;
};

bool parse_index(const std::string& s, int& out) {
    if (s.empty() || s.size() > 2 || !std::all_of(s.begin(), s.end(), ::isdigit)) return false;
    out = std::stoi(s);
    return out >= 1 && out <= kSites;
}

bool parse_name(const std::string& name, ParsedName& p) {
    using K = ParsedName::Kind;
    static const std::pair<const char*, K> simple[] = {
        {"sink", K::sink},
        {"n0", K::n0},
        {"uniform_local_diss", K::uniform_local_diss},
        {"uniform_local_deph", K::uniform_local_deph},
        {"uniform_nl_diss", K::uniform_nl_diss},
        {"uniform_nl_deph", K::uniform_nl_deph},
    };
    for (const auto& [n, k] : simple) {
        if (name == n) {
            p.kind = k;
            return true;
        }
    }
    std::vector<std::string> parts;
    std::stringstream ss(name);
    for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
    if (parts.size() == 2 && (parts[0] == "gamma_diss" || parts[0] == "gamma_deph")) {
        p.kind = parts[0] == "gamma_diss" ? K::gamma_diss : K::gamma_deph;
        return parse_index(parts[1], p.i);
    }
    if (parts.size() == 3 && (parts[0] == "nl_diss" || parts[0] == "nl_deph")) {
        p.kind = parts[0] == "nl_diss" ? K::nl_diss : K::nl_deph;
        return parse_index(parts[1], p.i) && parse_index(parts[2], p.j) && p.i != p.j;
    }
    return false;
}

void fill_offdiagonal(SiteMatrix& m, double v) {
    m.setConstant(v);
    m.diagonal().setZero();
}

} // namespace

bool is_sweep_parameter(const std::string& name) {
    ParsedName p;
    return parse_name(name, p);
}

void apply_sweep_value(const std::string& name, double value, DecoherenceSpec& rates, RunConfig& config) {
    using K = ParsedName::Kind;
    ParsedName p;
    if (!parse_name(name, p)) throw DomainError("unknown sweep parameter '" + name + "'");
    if (!std::isfinite(value) || value < 0.0) throw DomainError("sweep values must be finite and >= 0");
    switch (p.kind) {
    case K::sink: rates.sink = value; break;
    case K::n0:
        if (value < 1.0 || value != std::floor(value) || value > 1e9) {
            throw DomainError("sweep over n0 needs positive integer values");
        }
        config.n0 = static_cast<int>(value);
        break;
    case K::uniform_local_diss: rates.gamma_diss.setConstant(value); break;
    case K::uniform_local_deph: rates.gamma_deph.setConstant(value); break;
    case K::uniform_nl_diss: fill_offdiagonal(rates.nl_diss, value); break;
    case K::uniform_nl_deph: fill_offdiagonal(rates.nl_deph, value); break;
    case K::gamma_diss: rates.gamma_diss(p.i - 1) = value; break;
    case K::gamma_deph: rates.gamma_deph(p.i - 1) = value; break;
    case K::nl_diss: rates.nl_diss(p.i - 1, p.j - 1) = rates.nl_diss(p.j - 1, p.i - 1) = value; break;
    case K::nl_deph: rates.nl_deph(p.i - 1, p.j - 1) = rates.nl_deph(p.j - 1, p.i - 1) = value; break;
    }
}

const SweepRow& SweepTable::best() const {
    if (rows.empty()) throw DomainError("SweepTable::best: empty table");
    return *std::max_element(rows.begin(), rows.end(),
                             [](const SweepRow& a, const SweepRow& b) { return a.efficiency < b.efficiency; });
}

SweepTable sweep(const std::vector<std::string>& parameters, const std::vector<double>& values,
                 const DecoherenceSpec& base_rates, const RunConfig& config, const SiteNetwork& h) {
    if (parameters.empty()) throw DomainError("sweep: no parameter given");
    for (const auto& name : parameters) {
        if (!is_sweep_parameter(name)) throw DomainError("unknown sweep parameter '" + name + "'");
    }
    SweepTable table;
    table.parameters = parameters;
    for (double v : values) {
        DecoherenceSpec rates = base_rates;
        RunConfig run = config;
        for (const auto& name : parameters) apply_sweep_value(name, v, rates, run);
        table.rows.push_back({v, simulate(run, h, rates).final_efficiency});
    }
    return table;
}

std::vector<double> linear_range(double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw DomainError("linear_range: need start <= stop and step > 0");
    }
    const long long n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    for (long long k = 0; k <= n; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
}

} // namespace fmo
