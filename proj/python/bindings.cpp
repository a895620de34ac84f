// Python bindings: rate sets, run configs, the three theories, sweeps and the optimizer.

#include "fmo/errors.hpp"
#include "fmo/lindblad_oracle.hpp"
#include "fmo/optimizer.hpp"
#include "fmo/scenario.hpp"
#include "fmo/simulate.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace fmo;

namespace {

const SiteNetwork& default_network() {
    static const SiteNetwork h = to_angular(build_fmo_hamiltonian());
    return h;
}

Eigen::MatrixXd populations(const Trajectory& t) {
    Eigen::MatrixXd out(t.samples.size(), kSites);
    for (std::size_t i = 0; i < t.samples.size(); ++i)
        for (int j = 0; j < kSites; ++j) out(i, j) = t.samples[i].populations[j];
    return out;
}

Eigen::VectorXd sink(const Trajectory& t) {
    Eigen::VectorXd out(t.samples.size());
    for (std::size_t i = 0; i < t.samples.size(); ++i) out(i) = t.samples[i].sink;
    return out;
}

py::dict aux(const Trajectory& t) {
    py::dict d;
    for (std::size_t k = 0; k < t.aux_names.size(); ++k) {
        Eigen::VectorXd col(t.samples.size());
        for (std::size_t i = 0; i < t.samples.size(); ++i) col(i) = t.samples[i].aux[k];
        d[py::str(t.aux_names[k])] = col;
    }
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Excitation transfer in the seven-site FMO network";

    // ---- errors ----
    auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<UnitError>(m, "UnitError", domain);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<StepSizeError>(m, "StepSizeError", PyExc_RuntimeError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    // ---- model ----
    py::enum_<Unit>(m, "Unit").value("wavenumber", Unit::wavenumber).value("angular_ps", Unit::angular_ps);
    py::enum_<Theory>(m, "Theory")
        .value("semiclassical", Theory::semiclassical)
        .value("meanfield", Theory::meanfield)
        .value("oracle", Theory::oracle);

    py::class_<SiteNetwork>(m, "SiteNetwork")
        .def_readwrite("elements", &SiteNetwork::elements)
        .def_readwrite("unit", &SiteNetwork::unit);
    m.def("build_fmo_hamiltonian", &build_fmo_hamiltonian, "Site energies and couplings in cm^-1");
    m.def("to_angular", &to_angular, py::arg("network"));

    py::class_<DecoherenceSpec>(m, "DecoherenceSpec")
        .def(py::init<>())
        .def_static("null_with_sink", &DecoherenceSpec::null_with_sink, py::arg("sink"))
        .def_readwrite("gamma_diss", &DecoherenceSpec::gamma_diss)
        .def_readwrite("gamma_deph", &DecoherenceSpec::gamma_deph)
        .def_readwrite("nl_diss", &DecoherenceSpec::nl_diss)
        .def_readwrite("nl_deph", &DecoherenceSpec::nl_deph)
        .def_readwrite("sink", &DecoherenceSpec::sink);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init([](int n0, double horizon, std::optional<double> step, double sample_interval, Theory theory,
                         bool step_guard) {
                 RunConfig c;
                 c.n0 = n0;
                 c.horizon = horizon;
                 c.theory = theory;
                 c.step = step ? *step : RunConfig::default_step(theory);
                 c.sample_interval = sample_interval;
                 c.step_guard = step_guard;
                 return c;
             }),
             py::arg("n0") = 100, py::arg("horizon") = 5.0, py::arg("step") = py::none(),
             py::arg("sample_interval") = 0.01, py::arg("theory") = Theory::meanfield, py::arg("step_guard") = true)
        .def_readwrite("n0", &RunConfig::n0)
        .def_readwrite("horizon", &RunConfig::horizon)
        .def_readwrite("step", &RunConfig::step)
        .def_readwrite("sample_interval", &RunConfig::sample_interval)
        .def_readwrite("theory", &RunConfig::theory)
        .def_readwrite("step_guard", &RunConfig::step_guard);

    py::class_<RateViolation>(m, "RateViolation")
        .def_readonly("entry", &RateViolation::entry)
        .def_readonly("reason", &RateViolation::reason);
    py::class_<RateValidation>(m, "RateValidation")
        .def("ok", &RateValidation::ok)
        .def("describe", &RateValidation::describe)
        .def_readonly("violations", &RateValidation::violations);
    m.def("validate_rates", &validate_rates, py::arg("rates"));
    m.def("transfer_efficiency", &transfer_efficiency, py::arg("sink_population"), py::arg("n0"));

    // ---- trajectories ----
    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("n0", &Trajectory::n0)
        .def_readonly("final_efficiency", &Trajectory::final_efficiency)
        .def_property_readonly("times", &Trajectory::times)
        .def_property_readonly("populations", &populations, "samples x 7 population ratios")
        .def_property_readonly("sink", &sink, "absolute sink population per sample")
        .def_property_readonly("aux", &aux);

    m.def(
        "simulate",
        [](const RunConfig& config, const DecoherenceSpec& rates) { return simulate(config, default_network(), rates); },
        py::arg("config"), py::arg("rates"), py::call_guard<py::gil_scoped_release>());

    py::class_<OracleResult>(m, "OracleResult")
        .def_readonly("trajectory", &OracleResult::trajectory)
        .def_readonly("factorization_residual", &OracleResult::factorization_residual)
        .def_readonly("max_trace_error", &OracleResult::max_trace_error)
        .def_readonly("min_eigenvalue", &OracleResult::min_eigenvalue)
        .def_readonly("dimension", &OracleResult::dimension);
    m.def(
        "simulate_oracle",
        [](const RunConfig& config, const DecoherenceSpec& rates, double hopping_scale) {
            OracleOptions opt;
            opt.hopping_scale = hopping_scale;
            return simulate_oracle(config, default_network(), rates, opt);
        },
        py::arg("config"), py::arg("rates"), py::arg("hopping_scale") = 1.0,
        py::call_guard<py::gil_scoped_release>());

    // ---- sweeps and optimization ----
    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("value", &SweepRow::value)
        .def_readonly("efficiency", &SweepRow::efficiency);
    py::class_<SweepTable>(m, "SweepTable")
        .def_readonly("parameters", &SweepTable::parameters)
        .def_readonly("rows", &SweepTable::rows)
        .def("best", &SweepTable::best, py::return_value_policy::copy);
    m.def(
        "sweep",
        [](const std::vector<std::string>& parameters, const std::vector<double>& values,
           const DecoherenceSpec& base_rates, const RunConfig& config) {
            return sweep(parameters, values, base_rates, config, default_network());
        },
        py::arg("parameters"), py::arg("values"), py::arg("base_rates"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
    m.def("linear_range", &linear_range, py::arg("start"), py::arg("stop"), py::arg("step"));

    py::class_<OptimizerOptions>(m, "OptimizerOptions")
        .def(py::init<>())
        .def_readwrite("starts", &OptimizerOptions::starts)
        .def_readwrite("seed", &OptimizerOptions::seed)
        .def_readwrite("max_evaluations", &OptimizerOptions::max_evaluations)
        .def_readwrite("pinned_dissipation", &OptimizerOptions::pinned_dissipation)
        .def_readwrite("search_step", &OptimizerOptions::search_step);
    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("best_rates", &OptimizationResult::best_rates)
        .def_readonly("best_vector", &OptimizationResult::best_vector)
        .def_readonly("best_efficiency", &OptimizationResult::best_efficiency)
        .def_readonly("evaluations", &OptimizationResult::evaluations)
        .def_readonly("converged", &OptimizationResult::converged);
    m.def(
        "optimize_dephasing",
        [](const RunConfig& config, const OptimizerOptions& options) {
            return optimize_dephasing(config, default_network(), options);
        },
        py::arg("config"), py::arg("options") = OptimizerOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def(
        "objective",
        [](const RateVector& rates, const RunConfig& config) { return objective(rates, config, default_network()); },
        py::arg("rates"), py::arg("config"));

    // ---- scenarios ----
    m.def(
        "run_config_text",
        [](const std::string& text, const std::string& out_dir, const std::string& stem) {
            const ScenarioOutcome o = run_scenario(parse_config(text), {out_dir, stem});
            return py::make_tuple(o.exit_status, o.summary, o.files);
        },
        py::arg("text"), py::arg("out_dir") = ".", py::arg("stem") = "run",
        "Parse and run a scenario config; returns (exit_status, summary, files)");
}
