#include "fmo/model.hpp"

#include "fmo/errors.hpp"

#include <cmath>
#include <sstream>

namespace fmo {

std::string to_string(Unit u) {
    return u == Unit::wavenumber ? "wavenumber" : "angular_ps";
}

std::string to_string(Theory t) {
    switch (t) {
    case Theory::semiclassical: return "semiclassical";
    case Theory::meanfield: return "meanfield";
    case Theory::oracle: return "oracle";
    }
    return "unknown";
}

Theory theory_from_string(const std::string& name) {
    if (name == "semiclassical") return Theory::semiclassical;
    if (name == "meanfield") return Theory::meanfield;
    if (name == "oracle") return Theory::oracle;
    throw DomainError("unknown theory '" + name + "' (expected semiclassical, meanfield or oracle)");
}

void RunConfig::check() const {
    if (n0 < 1) throw DomainError("n0 must be a positive integer");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be > 0");
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("step must be > 0");
    if (step > horizon) throw DomainError("step must not exceed the horizon");
    if (!(sample_interval >= step)) throw DomainError("sample interval must be >= step");
}

double RunConfig::default_step(Theory theory) {
    switch (theory) {
    case Theory::semiclassical: return 0.0005;
    // RK4 error pushes zero eigenvalues of near-pure ρ negative as step⁴.
    case Theory::oracle: return 0.00025;
    default: return 0.001;
    }
}

std::string RateValidation::describe() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i].entry << ": " << violations[i].reason;
    }
    return os.str();
}

SiteNetwork build_fmo_hamiltonian() {
    SiteNetwork net;
    // clang-format off
    net.elements <<
         215.0, -104.1,    5.1,   -4.3,    4.7,  -15.1,   -7.8,
        -104.1,  220.0,   32.6,    7.1,    5.4,    8.3,    0.8,
           5.1,   32.6,    0.0,  -46.8,    1.0,   -8.1,    5.1,
          -4.3,    7.1,  -46.8,  125.0,  -70.7,  -14.7,  -61.5,
           4.7,    5.4,    1.0,  -70.7,  450.0,   89.7,   -2.5,
         -15.1,    8.3,   -8.1,  -14.7,   89.7,  330.0,   32.7,
          -7.8,    0.8,    5.1,  -61.5,   -2.5,   32.7,  280.0;
    // clang-format on
    net.unit = Unit::wavenumber;
    return net;
}

SiteNetwork to_angular(const SiteNetwork& network) {
    if (network.unit != Unit::wavenumber) {
        throw UnitError("to_angular: network is already in angular_ps units");
    }
    SiteNetwork out;
    out.elements = network.elements / kWavenumberPerInversePs;
    out.unit = Unit::angular_ps;
    return out;
}

void require_angular(const SiteNetwork& network, const char* who) {
    if (network.unit != Unit::angular_ps) {
        throw UnitError(std::string(who) + ": site network must be in angular_ps units");
    }
}

namespace {

void check_entry(std::vector<RateViolation>& out, const std::string& name, double v) {
    if (!std::isfinite(v)) {
        out.push_back({name, "not finite"});
    } else if (v < 0.0) {
        out.push_back({name, "negative (" + std::to_string(v) + ")"});
    }
}

void check_nonlocal(std::vector<RateViolation>& out, const std::string& prefix, const SiteMatrix& m) {
    for (int i = 0; i < kSites; ++i) {
        for (int j = 0; j < kSites; ++j) {
            const std::string name = prefix + "." + std::to_string(i + 1) + "." + std::to_string(j + 1);
            if (i == j) {
                if (m(i, i) != 0.0) out.push_back({name, "diagonal must be zero"});
                continue;
            }
            check_entry(out, name, m(i, j));
            if (j > i && m(i, j) != m(j, i)) {
                out.push_back({name, "asymmetric (" + prefix + "." + std::to_string(j + 1) + "." +
                                         std::to_string(i + 1) + " differs)"});
            }
        }
    }
}

} // namespace

RateValidation validate_rates(const DecoherenceSpec& spec) {
    RateValidation result;
    auto& v = result.violations;
    for (int j = 0; j < kSites; ++j) {
        check_entry(v, "gamma_diss." + std::to_string(j + 1), spec.gamma_diss(j));
        check_entry(v, "gamma_deph." + std::to_string(j + 1), spec.gamma_deph(j));
    }
    check_nonlocal(v, "nl_diss", spec.nl_diss);
    check_nonlocal(v, "nl_deph", spec.nl_deph);
    check_entry(v, "sink", spec.sink);
    return result;
}

double transfer_efficiency(double sink_population, int n0) {
    if (n0 <= 0) throw DomainError("transfer_efficiency: n0 must be positive");
    if (!(sink_population >= 0.0)) throw DomainError("transfer_efficiency: sink population must be >= 0");
    return sink_population / static_cast<double>(n0);
}

} // namespace fmo
