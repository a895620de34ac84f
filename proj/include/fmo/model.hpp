// model.hpp: FMO site network, decoherence rates, run configuration, efficiency
//
// Site indices are 1-based in every user-facing surface (config keys, CSV
// columns, violation messages); the sink/reaction center is site 8. Storage
// below is 0-based Eigen.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace fmo {

inline constexpr int kSites = 7;
inline constexpr int kSinkSite = 3;            // 1-based site feeding the reaction center
inline constexpr double kWavenumberPerInversePs = 5.3;  // 1 ps^-1 = 5.3 cm^-1 (hbar = 1)
inline constexpr double kPinnedDissipation = 0.0005;    // ps^-1, nanosecond exciton lifetime

using SiteMatrix = Eigen::Matrix<double, kSites, kSites>;
using SiteVector = Eigen::Matrix<double, kSites, 1>;
using cplx = std::complex<double>;

enum class Unit { wavenumber, angular_ps };
enum class Theory { semiclassical, meanfield, oracle };

std::string to_string(Unit u);
std::string to_string(Theory t);
Theory theory_from_string(const std::string& name);

// Site energies on the diagonal, hopping rates off the diagonal.
struct SiteNetwork {
    SiteMatrix elements = SiteMatrix::Zero();
    Unit unit = Unit::wavenumber;

    static constexpr int n_sites = kSites;

    double energy(int site) const { return elements(site, site); }
    SiteVector energies() const { return elements.diagonal(); }
    // Off-diagonal part only (g_ij with g_jj = 0).
    SiteMatrix couplings() const {
        SiteMatrix g = elements;
        g.diagonal().setZero();
        return g;
    }
};

// All rates in ps^-1.
struct DecoherenceSpec {
    SiteVector gamma_diss = SiteVector::Zero();  // local dissipation Γ_j
    SiteVector gamma_deph = SiteVector::Zero();  // local dephasing γ_j
    SiteMatrix nl_diss = SiteMatrix::Zero();     // non-local dissipation Γ_ij
    SiteMatrix nl_deph = SiteMatrix::Zero();     // non-local dephasing γ_ij
    double sink = 0.0;                           // Γ_8

    static DecoherenceSpec null_with_sink(double sink_rate) {
        DecoherenceSpec s;
        s.sink = sink_rate;
        return s;
    }
};

struct RunConfig {
    int n0 = 100;
    double horizon = 5.0;          // ps
    double step = 0.001;           // ps
    double sample_interval = 0.01; // ps
    Theory theory = Theory::meanfield;
    bool step_guard = true;        // repeat at step/2 and compare final sink populations

    void check() const;

    // 0.001 ps for mean-field. The semiclassical set uses 0.0005 ps because its
    // doubled hopping misses the 1e-6 step-halving tolerance at 0.001 ps; the
    // oracle uses 0.00025 ps to keep weakly dephased ρ above the -1e-7 eigenvalue floor.
    static double default_step(Theory theory);
};

struct RateViolation {
    std::string entry;   // e.g. "gamma_deph.3", "nl_diss.1.2"
    std::string reason;
};

struct RateValidation {
    std::vector<RateViolation> violations;
    bool ok() const { return violations.empty(); }
    std::string describe() const;
};

// Hamiltonian matrix elements in cm^-1, site 3 at zero energy.
SiteNetwork build_fmo_hamiltonian();

// Divides every element by 5.3. Throws UnitError unless the input is in wavenumbers.
SiteNetwork to_angular(const SiteNetwork& network);

RateValidation validate_rates(const DecoherenceSpec& spec);

// sink_population / n0, unclamped.
double transfer_efficiency(double sink_population, int n0);

void require_angular(const SiteNetwork& network, const char* who);

} // namespace fmo
