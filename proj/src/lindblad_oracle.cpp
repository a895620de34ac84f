#include "fmo/lindblad_oracle.hpp"

#include "fmo/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <functional>

namespace fmo {

namespace {

std::string format_eigenvalue(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

constexpr int kS3 = kSinkSite - 1;
constexpr int kReactionCenter = kModes - 1;
using SpMat = Eigen::SparseMatrix<cplx>;

} // namespace

// ------------------------------ Fock basis ------------------------------------

FockBasis::FockBasis(int n0_max) : n0_max_(n0_max) {
    if (n0_max < 1) throw DomainError("build_fock_basis: n0_max must be >= 1");
    Occupation occ{};
    // Depth-first over modes in order yields lexicographic enumeration.
    std::function<void(int, int)> fill = [&](int mode, int remaining) {
        if (mode == kModes) {
            index_.emplace(occ, static_cast<int>(states_.size()));
            states_.push_back(occ);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            occ[mode] = k;
            fill(mode + 1, remaining - k);
        }
        occ[mode] = 0;
    };
    fill(0, n0_max);
}

int FockBasis::index(const Occupation& occ) const {
    const auto it = index_.find(occ);
    if (it == index_.end()) throw DomainError("FockBasis::index: occupation outside the sector");
    return it->second;
}

Eigen::SparseMatrix<cplx> FockBasis::annihilation(int mode) const {
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int col = 0; col < dimension(); ++col) {
        const Occupation& s = states_[col];
        if (s[mode] == 0) continue;
        Occupation lowered = s;
        --lowered[mode];
        trip.emplace_back(index(lowered), col, std::sqrt(static_cast<double>(s[mode])));
    }
    SpMat a(dimension(), dimension());
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

Eigen::VectorXd FockBasis::occupation(int mode) const {
    Eigen::VectorXd n(dimension());
    for (int i = 0; i < dimension(); ++i) n(i) = states_[i][mode];
    return n;
}

FockBasis build_fock_basis(int n0_max) { return FockBasis(n0_max); }

// ------------------------------ operators -------------------------------------

void MonomialOperator::add_left(double coeff, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
    for (std::size_t r = 0; r < target.size(); ++r) {
        if (target[r] < 0) continue;
        out.row(target[r]) += (coeff * weight[r]) * rho.row(static_cast<Eigen::Index>(r));
    }
}

void MonomialOperator::add_right(double coeff, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
    // (ρM)_{r,y} = ρ_{r,c} M_{c,y}, and column y of M is nonzero only at row target[y].
    for (std::size_t y = 0; y < target.size(); ++y) {
        if (target[y] < 0) continue;
        out.col(static_cast<Eigen::Index>(y)) += (coeff * weight[y]) * rho.col(target[y]);
    }
}

MonomialOperator monomial_annihilation(const FockBasis& basis, int mode) {
    MonomialOperator m;
    m.target.assign(basis.dimension(), -1);
    m.weight.assign(basis.dimension(), 0.0);
    for (int c = 0; c < basis.dimension(); ++c) {
        const Occupation& s = basis.state(c);
        if (s[mode] == 0) continue;
        Occupation lowered = s;
        --lowered[mode];
        m.target[c] = basis.index(lowered);
        m.weight[c] = std::sqrt(static_cast<double>(s[mode]));
    }
    return m;
}

MonomialOperator monomial_hop(const FockBasis& basis, int to_mode, int from_mode) {
    MonomialOperator m;
    m.target.assign(basis.dimension(), -1);
    m.weight.assign(basis.dimension(), 0.0);
    for (int c = 0; c < basis.dimension(); ++c) {
        const Occupation& s = basis.state(c);
        if (s[from_mode] == 0) continue;
        Occupation moved = s;
        const double w_from = std::sqrt(static_cast<double>(moved[from_mode]--));
        const double w_to = std::sqrt(static_cast<double>(++moved[to_mode]));
        m.target[c] = basis.index(moved);  // total excitation unchanged, stays in the sector
        m.weight[c] = w_from * w_to;
    }
    return m;
}

// ------------------------------ Liouvillian -----------------------------------

Liouvillian::Liouvillian(const SiteNetwork& h, const DecoherenceSpec& rates, const FockBasis& basis,
                         double hopping_scale) {
    require_angular(h, "Liouvillian");
    const int dim = basis.dimension();
    const cplx I{0.0, 1.0};
    std::vector<Eigen::VectorXd> n(kModes);
    for (int k = 0; k < kModes; ++k) n[k] = basis.occupation(k);

    Eigen::VectorXd energy = Eigen::VectorXd::Zero(dim);
    for (int j = 0; j < kSites; ++j) energy += h.energy(j) * n[j];

    // Entrywise coefficient for ρ_rc from diagonal operators D: −(Dρ + ρD) and
    // 2 D_i ρ D_j only see D(r) and D(c).
    Eigen::MatrixXd damping = Eigen::MatrixXd::Zero(dim, dim);
    auto add_entrywise = [&](const std::function<double(int, int)>& f) {
        for (int c = 0; c < dim; ++c)
            for (int r = 0; r < dim; ++r) damping(r, c) += f(r, c);
    };

    for (int i = 0; i < kSites; ++i) {
        for (int j = 0; j < kSites; ++j) {
            if (i == j) continue;
            // Unordered pair {i,j} contributes s·g_ij (a_i†a_j + a_j†a_i); split over both orders.
            const double g = hopping_scale * h.elements(std::min(i, j), std::max(i, j));
            if (g != 0.0) hops_.push_back({g, monomial_hop(basis, i, j)});
        }
    }

    for (int j = 0; j < kSites; ++j) {
        const double gd = rates.gamma_diss(j);
        if (gd != 0.0) {
            const MonomialOperator a = monomial_annihilation(basis, j);
            jumps_.push_back({gd, a, a});
            const Eigen::VectorXd& nj = n[j];
            add_entrywise([&](int r, int c) { return -gd * (nj(r) + nj(c)); });
        }
        const double gp = rates.gamma_deph(j);
        if (gp != 0.0) {
            const Eigen::VectorXd& nj = n[j];
            add_entrywise([&](int r, int c) {
                return gp * (2.0 * nj(r) * nj(c) - nj(r) * nj(r) - nj(c) * nj(c));
            });
        }
    }

    for (int i = 0; i < kSites; ++i) {
        for (int j = 0; j < kSites; ++j) {
            if (i == j) continue;
            const double gd = rates.nl_diss(i, j);
            if (gd != 0.0) {
                jumps_.push_back({gd, monomial_annihilation(basis, i), monomial_annihilation(basis, j)});
                anticomm_.push_back({gd, monomial_hop(basis, j, i)});  // a_j† a_i
            }
            const double gp = rates.nl_deph(i, j);
            if (gp != 0.0) {
                const Eigen::VectorXd& ni = n[i];
                const Eigen::VectorXd& nj = n[j];
                add_entrywise([&](int r, int c) {
                    return gp * (2.0 * ni(r) * nj(c) - nj(c) * ni(c) - nj(r) * ni(r));
                });
            }
        }
    }

    if (rates.sink != 0.0) {
        const MonomialOperator lift = monomial_hop(basis, kReactionCenter, kS3);  // a8† a3
        jumps_.push_back({rates.sink, lift, lift});
        // L†L = a3†a3 a8 a8† = n3 (n8 + 1)
        const Eigen::VectorXd drain = n[kS3].cwiseProduct(n[kReactionCenter] + Eigen::VectorXd::Ones(dim));
        const double s = rates.sink;
        add_entrywise([&](int r, int c) { return -s * (drain(r) + drain(c)); });
    }

    entrywise_ = damping.cast<cplx>();
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r) entrywise_(r, c) += -I * (energy(r) - energy(c));
}

Eigen::MatrixXcd Liouvillian::apply(const Eigen::MatrixXcd& rho) const {
    const cplx I{0.0, 1.0};
    const int dim = dimension();
    Eigen::MatrixXcd out = entrywise_.cwiseProduct(rho);
    Eigen::MatrixXcd commutator = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& hop : hops_) {
        hop.op.add_left(hop.coeff, rho, commutator);
        hop.op.add_right(-hop.coeff, rho, commutator);
    }
    out += -I * commutator;
    for (const auto& jmp : jumps_) {
        // (L_i ρ L_j†)_{x,z} = Σ L_i[x,r] ρ[r,c] L_j[z,c]  (real weights)
        const double scale = 2.0 * jmp.rate;
        for (int c = 0; c < dim; ++c) {
            const int z = jmp.right.target[c];
            if (z < 0) continue;
            const double wc = scale * jmp.right.weight[c];
            for (int r = 0; r < dim; ++r) {
                const int x = jmp.left.target[r];
                if (x < 0) continue;
                out(x, z) += (wc * jmp.left.weight[r]) * rho(r, c);
            }
        }
    }
    for (const auto& ac : anticomm_) {
        ac.op.add_left(-ac.rate, rho, out);
        ac.op.add_right(-ac.rate, rho, out);
    }
    return out;
}

Eigen::MatrixXcd apply_liouvillian(const DensityMatrixState& rho, const SiteNetwork& h,
                                   const DecoherenceSpec& rates, const FockBasis& basis,
                                   double hopping_scale) {
    return Liouvillian(h, rates, basis, hopping_scale).apply(rho.rho);
}

DensityMatrixState init_oracle(const FockBasis& basis, int n0) {
    if (n0 < 1 || n0 > basis.n0_max()) throw DomainError("init_oracle: n0 must lie in 1..n0_max");
    Occupation occ{};
    occ[0] = n0;
    const int idx = basis.index(occ);
    DensityMatrixState s{Eigen::MatrixXcd::Zero(basis.dimension(), basis.dimension())};
    s.rho(idx, idx) = 1.0;
    return s;
}

// ------------------------------ simulation ------------------------------------

OracleResult simulate_oracle(const RunConfig& config, const SiteNetwork& h, const DecoherenceSpec& rates,
                             const OracleOptions& options) {
    config.check();
    if (config.theory != Theory::oracle) throw DomainError("simulate_oracle: config.theory must be oracle");
    if (config.n0 > options.max_n0) {
        throw CapacityError("simulate_oracle: n0 = " + std::to_string(config.n0) +
                            " exceeds the oracle cap of " + std::to_string(options.max_n0));
    }
    require_angular(h, "simulate_oracle");

    const FockBasis basis(config.n0);
    const Liouvillian liouvillian(h, rates, basis, options.hopping_scale);
    std::vector<Eigen::VectorXd> n(kModes);
    for (int k = 0; k < kModes; ++k) n[k] = basis.occupation(k);
    const Eigen::VectorXd n8n3 = n[kReactionCenter].cwiseProduct(n[kS3]);
    const double n0 = config.n0;
    const double floor = options.positivity_floor;

    auto deriv = [&](double, const DensityMatrixState& s) { return DensityMatrixState{liouvillian.apply(s.rho)}; };
    auto observe = [&](double t, const DensityMatrixState& s) {
        const Eigen::VectorXd pop = s.rho.diagonal().real();
        Sample out;
        out.t = t;
        for (int m = 0; m < kSites; ++m) out.populations[m] = n[m].dot(pop) / n0;
        out.sink = n[kReactionCenter].dot(pop);
        const double n3 = n[kS3].dot(pop);
        const double corr = n8n3.dot(pop);
        const Eigen::MatrixXcd herm = 0.5 * (s.rho + s.rho.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
        const double min_eig = eig.eigenvalues().minCoeff();
        if (min_eig < floor) {
            throw NumericalError("simulate_oracle: density matrix lost positivity (min eigenvalue " +
                                     format_eigenvalue(min_eig) + ")",
                                 t);
        }
        out.aux = {s.rho.trace().real(), min_eig, corr, std::abs(corr - out.sink * n3)};
        return out;
    };

    IntegrationOptions opt{config.horizon, config.step, config.sample_interval, config.step_guard,
                           1e-6 * n0};
    OracleResult result;
    result.dimension = basis.dimension();
    result.trajectory = integrate(deriv, init_oracle(basis, config.n0), opt, observe);
    auto& traj = result.trajectory;
    traj.n0 = config.n0;
    traj.aux_names = {"trace", "min_eigenvalue", "n8n3", "factorization_residual"};
    traj.final_efficiency = transfer_efficiency(std::max(0.0, traj.samples.back().sink), config.n0);
    result.min_eigenvalue = traj.samples.front().aux[1];
    for (const auto& s : traj.samples) {
        result.max_trace_error = std::max(result.max_trace_error, std::abs(s.aux[0] - 1.0));
        result.min_eigenvalue = std::min(result.min_eigenvalue, s.aux[1]);
        result.factorization_residual = std::max(result.factorization_residual, s.aux[3]);
    }
    return result;
}

} // namespace fmo
