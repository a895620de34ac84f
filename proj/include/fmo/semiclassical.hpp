// semiclassical.hpp: closed amplitude equations under <a†a> = |α|²

#pragma once

#include "fmo/integrator.hpp"
#include "fmo/model.hpp"

namespace fmo {

using AmplitudeVector = Eigen::Matrix<cplx, kSites, 1>;

struct AmplitudeState {
    AmplitudeVector alpha = AmplitudeVector::Zero();  // α_j = Tr(ρ a_j)
    double sink = 0.0;                                // n_8

    friend AmplitudeState operator+(const AmplitudeState& a, const AmplitudeState& b) {
        return {a.alpha + b.alpha, a.sink + b.sink};
    }
    friend AmplitudeState operator*(double h, const AmplitudeState& a) {
        return {h * a.alpha, h * a.sink};
    }
    friend bool is_finite(const AmplitudeState& s) {
        return s.alpha.allFinite() && std::isfinite(s.sink);
    }
};

// α_1 = √n0 (real), everything else zero.
AmplitudeState init_semiclassical(int n0);

// Time derivative of the amplitude equations. Hopping enters as 2 g_jk, local
// dissipation and dephasing both damp α_j, non-local dephasing does not appear.
AmplitudeState rhs_semiclassical(const AmplitudeState& state, const SiteNetwork& h,
                                 const DecoherenceSpec& rates);

// Integrates from init_semiclassical(config.n0). Throws DomainError unless
// config.theory is semiclassical.
Trajectory simulate_semiclassical(const RunConfig& config, const SiteNetwork& h,
                                  const DecoherenceSpec& rates);

// Same, from an arbitrary initial state (phase-invariance checks).
Trajectory simulate_semiclassical_from(const AmplitudeState& initial, const RunConfig& config,
                                       const SiteNetwork& h, const DecoherenceSpec& rates);

} // namespace fmo
