// meanfield.hpp: second-moment equations closed by <n8 n3> = <n8><n3>

#pragma once

#include "fmo/integrator.hpp"
#include "fmo/model.hpp"

namespace fmo {

using CorrelationMatrix = Eigen::Matrix<cplx, kSites, kSites>;

struct CorrelationState {
    CorrelationMatrix n = CorrelationMatrix::Zero();  // n_mn = <a_m† a_n>
    double sink = 0.0;                                // n_88

    friend CorrelationState operator+(const CorrelationState& a, const CorrelationState& b) {
        return {a.n + b.n, a.sink + b.sink};
    }
    friend CorrelationState operator*(double h, const CorrelationState& a) {
        return {h * a.n, h * a.sink};
    }
    friend bool is_finite(const CorrelationState& s) { return s.n.allFinite() && std::isfinite(s.sink); }
};

// n_11 = n0, all else zero.
CorrelationState init_meanfield(int n0);

// Time derivative of the closed second-moment set.
//
// Hopping enters with g_jk once (no factor 2), site energies only through
// ω_m − ω_n, dephasing only in the off-diagonal decay. Site 3 loses
// a·Γ8(n88 + 1) with a = 1 on its row/column and a = 2 on n_33, which keeps
// Σ n_mm + n_88 balanced against the sink gain.
CorrelationState rhs_meanfield(const CorrelationState& state, const SiteNetwork& h,
                               const DecoherenceSpec& rates);

// max |n_mn − conj(n_nm)|
double hermiticity_drift(const CorrelationMatrix& n);

// Aux columns: "hermiticity_drift", "total_excitations".
// Throws ConsistencyError if Hermiticity drifts beyond 1e-6·n0 at a sample.
Trajectory simulate_meanfield(const RunConfig& config, const SiteNetwork& h, const DecoherenceSpec& rates);

Trajectory simulate_meanfield_from(const CorrelationState& initial, const RunConfig& config,
                                   const SiteNetwork& h, const DecoherenceSpec& rates);

} // namespace fmo
