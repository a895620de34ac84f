#include "fmo/meanfield.hpp"

#include "fmo/errors.hpp"

#include <cmath>

namespace fmo {

namespace {

constexpr int kS3 = kSinkSite - 1;

// Constant pieces of the right-hand side, derived once per (h, rates).
struct MeanfieldCoefficients {
    SiteMatrix hamiltonian;  // ω on the diagonal, g off it
    SiteMatrix decay;        // entrywise damping of n_mn (sink excluded)
    SiteMatrix nl_diss;
    SiteMatrix sink_weight;  // a in a·Γ8·n_mn(n88 + 1)
    bool has_nl_diss = false;

    MeanfieldCoefficients(const SiteNetwork& h, const DecoherenceSpec& r) {
        hamiltonian = h.elements;
        for (int m = 0; m < kSites; ++m) {
            for (int n = 0; n < kSites; ++n) {
                decay(m, n) = m == n ? 2.0 * r.gamma_diss(m)
                                     : r.gamma_diss(m) + r.gamma_diss(n) + r.gamma_deph(m) +
                                           r.gamma_deph(n) - 2.0 * r.nl_deph(m, n);
                sink_weight(m, n) = (m == kS3 ? 1.0 : 0.0) + (n == kS3 ? 1.0 : 0.0);
            }
        }
        nl_diss = r.nl_diss;
        nl_diss.diagonal().setZero();
        has_nl_diss = !nl_diss.isZero(0.0);
    }
};

// Real and imaginary parts are propagated through real 7×7 products:
// with n = A + iB and real H, i(Hn − nH) = −(HB − BH) + i(HA − AH).
CorrelationState rhs_with(const CorrelationState& s, const MeanfieldCoefficients& c, double sink_rate) {
    const SiteMatrix re = s.n.real();
    const SiteMatrix im = s.n.imag();
    const double occupied = s.sink + 1.0;
    const SiteMatrix damping = c.decay + (sink_rate * occupied) * c.sink_weight;

    SiteMatrix d_re = -(c.hamiltonian * im - im * c.hamiltonian);
    SiteMatrix d_im = c.hamiltonian * re - re * c.hamiltonian;
    if (c.has_nl_diss) {
        d_re -= c.nl_diss * re + re * c.nl_diss;
        d_im -= c.nl_diss * im + im * c.nl_diss;
    }
    d_re -= damping.cwiseProduct(re);
    d_im -= damping.cwiseProduct(im);

    CorrelationState d;
    d.n.real() = d_re;
    d.n.imag() = d_im;
    d.sink = 2.0 * sink_rate * re(kS3, kS3) * occupied;
    return d;
}

} // namespace

CorrelationState init_meanfield(int n0) {
    if (n0 < 1) throw DomainError("init_meanfield: n0 must be >= 1");
    CorrelationState s;
    s.n(0, 0) = static_cast<double>(n0);
    return s;
}

CorrelationState rhs_meanfield(const CorrelationState& state, const SiteNetwork& h,
                               const DecoherenceSpec& rates) {
    require_angular(h, "rhs_meanfield");
    return rhs_with(state, MeanfieldCoefficients(h, rates), rates.sink);
}

double hermiticity_drift(const CorrelationMatrix& n) {
    return (n - n.adjoint()).cwiseAbs().maxCoeff();
}

Trajectory simulate_meanfield_from(const CorrelationState& initial, const RunConfig& config,
                                   const SiteNetwork& h, const DecoherenceSpec& rates) {
    config.check();
    require_angular(h, "simulate_meanfield");
    const MeanfieldCoefficients coeff(h, rates);
    const double sink_rate = rates.sink;
    const double n0 = config.n0;
    const double drift_limit = 1e-6 * n0;

    auto deriv = [&](double, const CorrelationState& s) { return rhs_with(s, coeff, sink_rate); };
    auto observe = [=](double t, const CorrelationState& s) {
        Sample out;
        out.t = t;
        double total = s.sink;
        for (int m = 0; m < kSites; ++m) {
            out.populations[m] = s.n(m, m).real() / n0;
            total += s.n(m, m).real();
        }
        out.sink = s.sink;
        const double drift = hermiticity_drift(s.n);
        if (drift > drift_limit) {
            throw ConsistencyError("simulate_meanfield: Hermiticity drift " + std::to_string(drift) +
                                   " exceeds 1e-6*n0 at t = " + std::to_string(t) + " ps");
        }
        out.aux = {drift, total};
        return out;
    };
    IntegrationOptions opt{config.horizon, config.step, config.sample_interval, config.step_guard,
                           1e-6 * n0};
    Trajectory traj = integrate(deriv, initial, opt, observe);
    traj.n0 = config.n0;
    traj.aux_names = {"hermiticity_drift", "total_excitations"};
    traj.final_efficiency = transfer_efficiency(traj.samples.back().sink, config.n0);
    return traj;
}

Trajectory simulate_meanfield(const RunConfig& config, const SiteNetwork& h, const DecoherenceSpec& rates) {
    if (config.theory != Theory::meanfield) {
        throw DomainError("simulate_meanfield: config.theory must be meanfield");
    }
    return simulate_meanfield_from(init_meanfield(config.n0), config, h, rates);
}

} // namespace fmo
