// lindblad_oracle.hpp: exact master-equation propagation in a truncated Fock sector
//
// Eight bosonic modes (7 sites + reaction center) restricted to total
// occupation <= n0_max. Every Lindblad term either conserves the total
// excitation number or lowers it, so the truncation is exact for initial
// states inside the sector.

#pragma once

#include "fmo/integrator.hpp"
#include "fmo/model.hpp"

#include <Eigen/Sparse>

#include <array>
#include <map>
#include <vector>

namespace fmo {

inline constexpr int kModes = 8;  // sites 1..7 plus the reaction center
using Occupation = std::array<int, kModes>;

class FockBasis {
public:
    explicit FockBasis(int n0_max);

    int n0_max() const { return n0_max_; }
    int dimension() const { return static_cast<int>(states_.size()); }
    const Occupation& state(int ordinal) const { return states_.at(ordinal); }
    const std::vector<Occupation>& states() const { return states_; }
    // Throws DomainError for tuples outside the sector.
    int index(const Occupation& occ) const;
    int vacuum() const { return 0; }

    // Annihilation operator for mode k (0-based; k = 7 is the reaction center).
    Eigen::SparseMatrix<cplx> annihilation(int mode) const;
    // Diagonal of the number operator for mode k.
    Eigen::VectorXd occupation(int mode) const;

private:
    int n0_max_;
    std::vector<Occupation> states_;  // lexicographic
    std::map<Occupation, int> index_;
};

FockBasis build_fock_basis(int n0_max);

struct DensityMatrixState {
    Eigen::MatrixXcd rho;

    friend DensityMatrixState operator+(const DensityMatrixState& a, const DensityMatrixState& b) {
        return {a.rho + b.rho};
    }
    friend DensityMatrixState operator*(double h, const DensityMatrixState& a) { return {h * a.rho}; }
    friend bool is_finite(const DensityMatrixState& s) { return s.rho.allFinite(); }
};

struct OracleOptions {
    // Multiplier on each unordered pair's hopping g_ij. 1 gives the
    // Hamiltonian whose moment equations are the mean-field set; 2 counts
    // every ordered pair of the site sum separately.
    double hopping_scale = 1.0;
    int max_n0 = 2;
    double positivity_floor = -1e-7;
};

// Operator with at most one nonzero per column: column c maps to row target[c]
// (or nowhere when target[c] < 0) with weight[c]. Ladder operators and their
// products on a Fock basis all have this shape.
struct MonomialOperator {
    std::vector<int> target;
    std::vector<double> weight;

    // out += coeff · (M ρ)
    void add_left(double coeff, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;
    // out += coeff · (ρ M)
    void add_right(double coeff, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;
};

MonomialOperator monomial_annihilation(const FockBasis& basis, int mode);
// a_i† a_j
MonomialOperator monomial_hop(const FockBasis& basis, int to_mode, int from_mode);

// Matrix-free Lindblad generator, precomputed for one (h, rates, basis).
class Liouvillian {
public:
    Liouvillian(const SiteNetwork& h, const DecoherenceSpec& rates, const FockBasis& basis,
                double hopping_scale = 1.0);

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
    int dimension() const { return static_cast<int>(entrywise_.rows()); }

private:
    struct Hop {
        double coeff;
        MonomialOperator op;  // a_i† a_j
    };
    struct Jump {
        double rate;
        MonomialOperator left;   // L_i
        MonomialOperator right;  // L_j, applied as L_j† on the right
    };
    struct Anticommutator {
        double rate;
        MonomialOperator op;  // L_j† L_i
    };

    std::vector<Hop> hops_;                 // −i c [a_i† a_j, ρ]
    std::vector<Jump> jumps_;               // 2 rate L_i ρ L_j†
    std::vector<Anticommutator> anticomm_;  // −rate (K ρ + ρ K), K not diagonal
    // Everything generated by diagonal operators: −i(E_r − E_c) from the site
    // energies plus the no-jump parts of dissipation, dephasing and the sink.
    Eigen::MatrixXcd entrywise_;
};

Eigen::MatrixXcd apply_liouvillian(const DensityMatrixState& rho, const SiteNetwork& h,
                                   const DecoherenceSpec& rates, const FockBasis& basis,
                                   double hopping_scale = 1.0);

// Pure Fock state with n0 excitations on site 1.
DensityMatrixState init_oracle(const FockBasis& basis, int n0);

struct OracleResult {
    // Aux columns: "trace", "min_eigenvalue", "n8n3", "factorization_residual".
    Trajectory trajectory;
    double factorization_residual = 0.0;  // max over samples of |<n8 n3> − <n8><n3>|
    double max_trace_error = 0.0;
    double min_eigenvalue = 0.0;
    int dimension = 0;
};

// Throws CapacityError when config.n0 > options.max_n0, NumericalError when
// the smallest eigenvalue at a sample falls below options.positivity_floor.
OracleResult simulate_oracle(const RunConfig& config, const SiteNetwork& h, const DecoherenceSpec& rates,
                             const OracleOptions& options = {});

} // namespace fmo
