#include "fmo/scenario.hpp"

#include "fmo/errors.hpp"
#include "fmo/lindblad_oracle.hpp"
#include "fmo/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace fmo {

std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::simulate: return "simulate";
    case Scenario::sweep: return "sweep";
    case Scenario::optimize: return "optimize";
    case Scenario::oracle: return "oracle";
    case Scenario::validate: return "validate";
    }
    return "unknown";
}

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// ------------------------------ parsing ---------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, sep);) out.push_back(trim(part));
    return out;
}

double parse_real(std::size_t line, const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "'" + key + "' expects a number, got '" + text + "'");
    }
}

long long parse_integer(std::size_t line, const std::string& key, const std::string& text) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw ParseError(line, "'" + key + "' expects a non-negative integer, got '" + text + "'");
    }
    try {
        return std::stoll(text);
    } catch (const std::exception&) {
        throw ParseError(line, "'" + key + "' is out of range");
    }
}

double parse_rate(std::size_t line, const std::string& key, const std::string& text) {
    const double v = parse_real(line, key, text);
    if (v < 0.0) throw ParseError(line, "negative rate for '" + key + "'");
    return v;
}

int parse_site(std::size_t line, const std::string& key, const std::string& text) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw ParseError(line, "bad site index '" + text + "' in '" + key + "'");
    }
    const long long i = text.size() > 3 ? 1000 : std::stoll(text);
    if (i < 1 || i > kSites) {
        throw ParseError(line, "site index " + text + " in '" + key + "' out of range 1..7");
    }
    return static_cast<int>(i);
}

bool parse_bool(std::size_t line, const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ParseError(line, "'" + key + "' expects true or false");
}

struct PendingSiteRate {
    std::size_t line;
    std::optional<int> site;  // nullopt = wildcard
    double value;
};

} // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::map<std::string, std::size_t> seen;
    std::vector<PendingSiteRate> diss, deph;
    std::optional<double> range_start, range_stop, range_step;
    std::size_t range_line = 0;
    bool has_values = false;

    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (value.empty()) throw ParseError(line_no, "empty value for '" + key + "'");
        if (const auto it = seen.find(key); it != seen.end()) {
            throw ParseError(line_no, "duplicate key '" + key + "' (first set on line " +
                                          std::to_string(it->second) + ")");
        }
        seen.emplace(key, line_no);

        const std::vector<std::string> parts = split(key, '.');
        const std::string& head = parts.front();

        if (key == "scenario") {
            static const std::map<std::string, Scenario> names = {{"simulate", Scenario::simulate},
                                                                  {"sweep", Scenario::sweep},
                                                                  {"optimize", Scenario::optimize},
                                                                  {"oracle", Scenario::oracle},
                                                                  {"validate", Scenario::validate}};
            const auto it = names.find(value);
            if (it == names.end()) throw ParseError(line_no, "unknown scenario '" + value + "'");
            cfg.scenario = it->second;
        } else if (key == "theory") {
            try {
                cfg.run.theory = theory_from_string(value);
            } catch (const DomainError& e) {
                throw ParseError(line_no, e.what());
            }
        } else if (key == "n0") {
            const long long n0 = parse_integer(line_no, key, value);
            if (n0 < 1 || n0 > 1000000000) throw ParseError(line_no, "n0 must be a positive integer");
            cfg.run.n0 = static_cast<int>(n0);
        } else if (key == "horizon") {
            cfg.run.horizon = parse_real(line_no, key, value);
            if (cfg.run.horizon <= 0.0) throw ParseError(line_no, "horizon must be > 0");
        } else if (key == "step") {
            cfg.run.step = parse_real(line_no, key, value);
            if (cfg.run.step <= 0.0) throw ParseError(line_no, "step must be > 0");
        } else if (key == "sample_interval") {
            cfg.run.sample_interval = parse_real(line_no, key, value);
            if (cfg.run.sample_interval <= 0.0) throw ParseError(line_no, "sample_interval must be > 0");
        } else if (key == "step_guard") {
            cfg.run.step_guard = parse_bool(line_no, key, value);
        } else if (key == "sink") {
            cfg.rates.sink = parse_rate(line_no, key, value);
        } else if ((head == "gamma_diss" || head == "gamma_deph") && parts.size() == 2) {
            auto& dest = head == "gamma_diss" ? diss : deph;
            const double v = parse_rate(line_no, key, value);
            if (parts[1] == "*") {
                dest.push_back({line_no, std::nullopt, v});
            } else {
                dest.push_back({line_no, parse_site(line_no, key, parts[1]), v});
            }
        } else if ((head == "nl_diss" || head == "nl_deph") && parts.size() == 3) {
            const int i = parse_site(line_no, key, parts[1]);
            const int j = parse_site(line_no, key, parts[2]);
            if (i == j) throw ParseError(line_no, "'" + key + "': non-local rates need two distinct sites");
            auto& m = head == "nl_diss" ? cfg.rates.nl_diss : cfg.rates.nl_deph;
            m(i - 1, j - 1) = parse_rate(line_no, key, value);
        } else if (key == "sweep.parameter") {
            cfg.sweep.parameters = split(value, ',');
            for (const auto& p : cfg.sweep.parameters) {
                if (!is_sweep_parameter(p)) throw ParseError(line_no, "unknown sweep parameter '" + p + "'");
            }
        } else if (key == "sweep.values") {
            has_values = true;
            for (const auto& v : split(value, ',')) {
                const double x = parse_real(line_no, key, v);
                if (x < 0.0) throw ParseError(line_no, "sweep values must be >= 0");
                cfg.sweep.values.push_back(x);
            }
        } else if (key == "sweep.start" || key == "sweep.stop" || key == "sweep.step") {
            range_line = line_no;
            const double x = parse_real(line_no, key, value);
            if (x < 0.0) throw ParseError(line_no, "'" + key + "' must be >= 0");
            (key == "sweep.start" ? range_start : key == "sweep.stop" ? range_stop : range_step) = x;
        } else if (key == "optimize.starts") {
            const long long s = parse_integer(line_no, key, value);
            if (s < 1 || s > 1000) throw ParseError(line_no, "optimize.starts must be in 1..1000");
            cfg.optimize.starts = static_cast<int>(s);
        } else if (key == "optimize.seed") {
            cfg.optimize.seed = static_cast<std::uint64_t>(parse_integer(line_no, key, value));
        } else if (key == "optimize.max_evaluations") {
            const long long s = parse_integer(line_no, key, value);
            if (s < 1 || s > 100000000) throw ParseError(line_no, "optimize.max_evaluations must be positive");
            cfg.optimize.max_evaluations = static_cast<int>(s);
        } else if (key == "optimize.pinned_dissipation") {
            cfg.optimize.pinned_dissipation = parse_rate(line_no, key, value);
        } else if (key == "oracle.hopping_scale") {
            cfg.hopping_scale = parse_real(line_no, key, value);
            if (cfg.hopping_scale <= 0.0) throw ParseError(line_no, "oracle.hopping_scale must be > 0");
        } else if (key == "output") {
            if (value.find('/') != std::string::npos) throw ParseError(line_no, "output is a file stem, not a path");
            cfg.output = value;
        } else {
            throw ParseError(line_no, "unknown key '" + key + "'");
        }
    }

    // Wildcards first, explicit sites override.
    auto apply_site_rates = [](const std::vector<PendingSiteRate>& pending, SiteVector& dest) {
        for (const auto& p : pending)
            if (!p.site) dest.setConstant(p.value);
        for (const auto& p : pending)
            if (p.site) dest(*p.site - 1) = p.value;
    };
    apply_site_rates(diss, cfg.rates.gamma_diss);
    apply_site_rates(deph, cfg.rates.gamma_deph);

    const bool has_range = range_start || range_stop || range_step;
    if (has_values && has_range) {
        throw ParseError(range_line, "give either sweep.values or sweep.start/stop/step, not both");
    }
    if (has_range) {
        if (!(range_start && range_stop && range_step)) {
            throw ParseError(range_line, "sweep range needs sweep.start, sweep.stop and sweep.step");
        }
        try {
            cfg.sweep.values = linear_range(*range_start, *range_stop, *range_step);
        } catch (const DomainError& e) {
            throw ParseError(range_line, e.what());
        }
    }

    if (cfg.scenario == Scenario::sweep) {
        if (cfg.sweep.parameters.empty()) throw ParseError(0, "sweep scenario needs sweep.parameter");
        if (cfg.sweep.values.empty()) throw ParseError(0, "sweep scenario needs sweep.values or a sweep range");
    }
    if (cfg.scenario == Scenario::oracle) cfg.run.theory = Theory::oracle;
    if (!seen.count("step")) cfg.run.step = RunConfig::default_step(cfg.run.theory);
    if (cfg.run.step > cfg.run.horizon) throw ParseError(seen.count("step") ? seen["step"] : 0, "step exceeds horizon");
    if (cfg.run.sample_interval < cfg.run.step) {
        cfg.run.sample_interval = cfg.run.step;
    }
    return cfg;
}

// ------------------------------ output ----------------------------------------

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << "t_ps";
    for (int m = 1; m <= kSites; ++m) os << ",p" << m;
    os << ",n8,efficiency\n";
    for (const auto& s : traj.samples) {
        os << format_number(s.t);
        for (double p : s.populations) os << ',' << format_number(p);
        os << ',' << format_number(s.sink) << ',' << format_number(s.sink / traj.n0) << '\n';
    }
    return os.str();
}

std::string sweep_csv(const SweepTable& table) {
    std::ostringstream os;
    os << "value,efficiency\n";
    for (const auto& r : table.rows) os << format_number(r.value) << ',' << format_number(r.efficiency) << '\n';
    return os.str();
}

std::string trace_csv(const OptimizationResult& result) {
    std::ostringstream os;
    os << "evaluation";
    for (int j = 1; j <= kSites; ++j) os << ",gamma_deph." << j;
    os << ",sink,efficiency\n";
    for (const auto& t : result.trace) {
        os << t.evaluation;
        for (double r : t.rates) os << ',' << format_number(r);
        os << ',' << format_number(t.efficiency) << '\n';
    }
    return os.str();
}

namespace {

std::string rates_line(const RateVector& r) {
    std::ostringstream os;
    os << "gamma_deph = (";
    for (int j = 0; j < kSites; ++j) os << (j ? ", " : "") << format_number(r[j]);
    os << "), sink = " << format_number(r[7]);
    return os.str();
}

class OutputWriter {
public:
    OutputWriter(const std::string& dir, std::string stem) : dir_(dir), stem_(std::move(stem)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
    }

    std::string write(const std::string& suffix, const std::string& content) {
        const auto path = (dir_ / (stem_ + suffix)).string();
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
        out << content;
        out.close();
        if (!out) throw std::runtime_error("failed writing '" + path + "'");
        files_.push_back(path);
        return path;
    }

    std::vector<std::string> files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::string stem_;
    std::vector<std::string> files_;
};

} // namespace

ScenarioOutcome run_scenario(const ScenarioConfig& config, const RunOptions& options) {
    const std::string stem = config.output.empty() ? options.default_stem : config.output;
    OutputWriter writer(options.out_dir, stem);
    ScenarioOutcome outcome;
    std::ostringstream sum;
    sum << "scenario = " << to_string(config.scenario) << '\n';

    const RateValidation validation = validate_rates(config.rates);
    if (!validation.ok()) {
        sum << "rates = invalid\n";
        for (const auto& v : validation.violations) sum << "violation " << v.entry << ": " << v.reason << '\n';
        outcome.exit_status = 1;
        outcome.summary = sum.str();
        writer.write("_summary.txt", outcome.summary);
        outcome.files = writer.files();
        return outcome;
    }

    const SiteNetwork h = to_angular(build_fmo_hamiltonian());
    const RunConfig& run = config.run;
    auto describe_run = [&](const RunConfig& r) {
        sum << "theory = " << to_string(r.theory) << '\n'
            << "n0 = " << r.n0 << '\n'
            << "horizon_ps = " << format_number(r.horizon) << '\n'
            << "step_ps = " << format_number(r.step) << '\n';
    };

    switch (config.scenario) {
    case Scenario::validate:
        sum << "rates = ok\n";
        break;
    case Scenario::simulate: {
        describe_run(run);
        const Trajectory traj = simulate(run, h, config.rates);
        writer.write("_trajectory.csv", trajectory_csv(traj));
        sum << "efficiency = " << format_number(traj.final_efficiency) << '\n';
        break;
    }
    case Scenario::oracle: {
        RunConfig r = run;
        r.theory = Theory::oracle;
        describe_run(r);
        OracleOptions oopt;
        oopt.hopping_scale = config.hopping_scale;
        const OracleResult res = simulate_oracle(r, h, config.rates, oopt);
        writer.write("_trajectory.csv", trajectory_csv(res.trajectory));
        sum << "dimension = " << res.dimension << '\n'
            << "efficiency = " << format_number(res.trajectory.final_efficiency) << '\n'
            << "factorization_residual = " << format_number(res.factorization_residual) << '\n'
            << "max_trace_error = " << format_number(res.max_trace_error) << '\n'
            << "min_eigenvalue = " << format_number(res.min_eigenvalue) << '\n';
        break;
    }
    case Scenario::sweep: {
        describe_run(run);
        const SweepTable table = sweep(config.sweep.parameters, config.sweep.values, config.rates, run, h);
        writer.write("_sweep.csv", sweep_csv(table));
        sum << "parameter = ";
        for (std::size_t i = 0; i < table.parameters.size(); ++i) sum << (i ? "," : "") << table.parameters[i];
        sum << "\npoints = " << table.rows.size() << '\n'
            << "best_value = " << format_number(table.best().value) << '\n'
            << "best_efficiency = " << format_number(table.best().efficiency) << '\n';
        break;
    }
    case Scenario::optimize: {
        RunConfig r = run;
        r.theory = Theory::meanfield;
        describe_run(r);
        const OptimizationResult res = optimize_dephasing(r, h, config.optimize);
        writer.write("_trace.csv", trace_csv(res));
        sum << "starts = " << config.optimize.starts << '\n'
            << "seed = " << config.optimize.seed << '\n'
            << "evaluations = " << res.evaluations << '\n'
            << "converged = " << (res.converged ? "true" : "false") << '\n'
            << "pinned_dissipation = " << format_number(config.optimize.pinned_dissipation) << '\n'
            << "best " << rates_line(res.best_vector) << '\n'
            << "best_efficiency = " << format_number(res.best_efficiency) << '\n';
        break;
    }
    }

    outcome.summary = sum.str();
    writer.write("_summary.txt", outcome.summary);
    outcome.files = writer.files();
    return outcome;
}

} // namespace fmo
