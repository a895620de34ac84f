#include "fmo/semiclassical.hpp"

#include "fmo/errors.hpp"

#include <cmath>

namespace fmo {

namespace {
constexpr int kS3 = kSinkSite - 1;
const cplx I{0.0, 1.0};
} // namespace

AmplitudeState init_semiclassical(int n0) {
    if (n0 < 1) throw DomainError("init_semiclassical: n0 must be >= 1");
    AmplitudeState s;
    s.alpha(0) = std::sqrt(static_cast<double>(n0));
    return s;
}

AmplitudeState rhs_semiclassical(const AmplitudeState& state, const SiteNetwork& h,
                                 const DecoherenceSpec& rates) {
    const SiteVector omega = h.energies();
    const SiteMatrix g = h.couplings();
    const auto& a = state.alpha;

    AmplitudeState d;
    const SiteVector damping = rates.gamma_diss + rates.gamma_deph;
    const AmplitudeVector hopped = g * a;
    const AmplitudeVector nl = rates.nl_diss * a;  // Γ_jj = 0 by invariant
    for (int j = 0; j < kSites; ++j) {
        d.alpha(j) = -I * (omega(j) * a(j) + 2.0 * hopped(j)) - damping(j) * a(j) - nl(j);
    }
    d.alpha(kS3) -= rates.sink * (state.sink + 1.0) * a(kS3);
    d.sink = 2.0 * rates.sink * std::norm(a(kS3)) * (state.sink + 1.0);
    return d;
}

Trajectory simulate_semiclassical_from(const AmplitudeState& initial, const RunConfig& config,
                                       const SiteNetwork& h, const DecoherenceSpec& rates) {
    config.check();
    require_angular(h, "simulate_semiclassical");
    const double n0 = config.n0;
    auto deriv = [&](double, const AmplitudeState& s) { return rhs_semiclassical(s, h, rates); };
    auto observe = [n0](double t, const AmplitudeState& s) {
        Sample out;
        out.t = t;
        for (int j = 0; j < kSites; ++j) out.populations[j] = std::norm(s.alpha(j)) / n0;
        out.sink = s.sink;
        return out;
    };
    IntegrationOptions opt{config.horizon, config.step, config.sample_interval, config.step_guard,
                           1e-6 * n0};
    Trajectory traj = integrate(deriv, initial, opt, observe);
    traj.n0 = config.n0;
    traj.final_efficiency = transfer_efficiency(traj.samples.back().sink, config.n0);
    return traj;
}

Trajectory simulate_semiclassical(const RunConfig& config, const SiteNetwork& h,
                                  const DecoherenceSpec& rates) {
    if (config.theory != Theory::semiclassical) {
        throw DomainError("simulate_semiclassical: config.theory must be semiclassical");
    }
    return simulate_semiclassical_from(init_semiclassical(config.n0), config, h, rates);
}

} // namespace fmo
