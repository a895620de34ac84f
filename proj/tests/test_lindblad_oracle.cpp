#include "fmo/errors.hpp"
#include "fmo/lindblad_oracle.hpp"
#include "fmo/meanfield.hpp"
#include "fmo/semiclassical.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace fmo;
using Eigen::MatrixXcd;

namespace {

const SiteNetwork& fmo_angular() {
    static const SiteNetwork h = to_angular(build_fmo_hamiltonian());
    return h;
}

// Dense ladder operator built straight from the state list.
MatrixXcd dense_annihilation(const FockBasis& basis, int mode) {
    const int dim = basis.dimension();
    MatrixXcd a = MatrixXcd::Zero(dim, dim);
    for (int c = 0; c < dim; ++c) {
        Occupation occ = basis.state(c);
        if (occ[mode] == 0) continue;
        const double amp = std::sqrt(static_cast<double>(occ[mode]));
        --occ[mode];
        a(basis.index(occ), c) = amp;
    }
    return a;
}

MatrixXcd dissipator(const MatrixXcd& li, const MatrixXcd& lj, const MatrixXcd& rho) {
    const MatrixXcd k = lj.adjoint() * li;
    return 2.0 * li * rho * lj.adjoint() - k * rho - rho * k;
}

// Brute-force generator with dense matrix products.
MatrixXcd brute_force(const MatrixXcd& rho, const SiteNetwork& h, const DecoherenceSpec& r,
                      const FockBasis& basis, double hopping_scale) {
    const int dim = basis.dimension();
    std::vector<MatrixXcd> a(kModes);
    for (int k = 0; k < kModes; ++k) a[k] = dense_annihilation(basis, k);
    MatrixXcd ham = MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < kSites; ++i) {
        ham += h.energy(i) * a[i].adjoint() * a[i];
        for (int j = i + 1; j < kSites; ++j) {
            const MatrixXcd hop = a[i].adjoint() * a[j];
            ham += hopping_scale * h.elements(i, j) * (hop + hop.adjoint());
        }
    }
    const cplx I{0.0, 1.0};
    MatrixXcd out = -I * (ham * rho - rho * ham);
    for (int i = 0; i < kSites; ++i) {
        const MatrixXcd ni = a[i].adjoint() * a[i];
        out += r.gamma_diss(i) * dissipator(a[i], a[i], rho);
        out += r.gamma_deph(i) * dissipator(ni, ni, rho);
        for (int j = 0; j < kSites; ++j) {
            if (i == j) continue;
            const MatrixXcd nj = a[j].adjoint() * a[j];
            out += r.nl_diss(i, j) * dissipator(a[i], a[j], rho);
            out += r.nl_deph(i, j) * dissipator(ni, nj, rho);
        }
    }
    const MatrixXcd lift = a[7].adjoint() * a[2];
    out += r.sink * dissipator(lift, lift, rho);
    return out;
}

DecoherenceSpec random_rates(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DecoherenceSpec r;
    for (int j = 0; j < kSites; ++j) {
        r.gamma_deph(j) = 10.0 * u(rng);
        r.gamma_diss(j) = 0.3 * u(rng);
    }
    for (int i = 0; i < kSites; ++i)
        for (int j = i + 1; j < kSites; ++j) {
            r.nl_deph(i, j) = r.nl_deph(j, i) = u(rng);
            r.nl_diss(i, j) = r.nl_diss(j, i) = 0.05 * u(rng);
        }
    r.sink = 2.0 * u(rng);
    return r;
}

MatrixXcd random_density(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = cplx(g(rng), g(rng));
    MatrixXcd rho = m * m.adjoint();
    return rho / rho.trace();
}

RunConfig oracle_config(int n0) {
    RunConfig c;
    c.n0 = n0;
    c.theory = Theory::oracle;
    c.step = RunConfig::default_step(Theory::oracle);
    c.step_guard = false;
    return c;
}

} // namespace

TEST_CASE("FockBasis sector sizes and indexing") {
    CHECK(FockBasis(1).dimension() == 9);
    CHECK(FockBasis(2).dimension() == 45);
    CHECK(FockBasis(3).dimension() == 165);
    const FockBasis b(2);
    CHECK(b.vacuum() == 0);
    for (int k = 0; k < b.dimension(); ++k) {
        int total = 0;
        for (int n : b.state(k)) total += n;
        CHECK(total <= 2);
        CHECK(b.index(b.state(k)) == k);
    }
    CHECK_THROWS_AS(b.index(Occupation{3, 0, 0, 0, 0, 0, 0, 0}), DomainError);
    CHECK_THROWS_AS(FockBasis(0), DomainError);
}

TEST_CASE("ladder operators match the dense construction and the number operator") {
    const FockBasis b(2);
    for (int k = 0; k < kModes; ++k) {
        const MatrixXcd a = MatrixXcd(b.annihilation(k));
        CHECK((a - dense_annihilation(b, k)).norm() < 1e-14);
        const MatrixXcd number = a.adjoint() * a;
        CHECK((number.diagonal().real() - b.occupation(k)).norm() < 1e-14);
        CHECK((number - MatrixXcd(number.diagonal().asDiagonal())).norm() < 1e-14);
    }
    // Canonical commutator holds on states below the truncation edge.
    const MatrixXcd a0 = MatrixXcd(b.annihilation(0));
    const MatrixXcd a1 = MatrixXcd(b.annihilation(1));
    const MatrixXcd c00 = a0 * a0.adjoint() - a0.adjoint() * a0;
    const MatrixXcd c01 = a0 * a1.adjoint() - a1.adjoint() * a0;
    for (int k = 0; k < b.dimension(); ++k) {
        int total = 0;
        for (int n : b.state(k)) total += n;
        if (total >= 2) continue;
        CHECK(std::abs(c00(k, k) - 1.0) < 1e-14);
        CHECK(c01.col(k).norm() < 1e-14);
    }
}

TEST_CASE("apply_liouvillian equals the dense brute-force generator") {
    std::mt19937_64 rng(314);
    for (int n0 : {1, 2}) {
        const FockBasis b(n0);
        for (double scale : {1.0, 2.0}) {
            for (int trial = 0; trial < 3; ++trial) {
                const DecoherenceSpec r = random_rates(rng);
                const MatrixXcd rho = random_density(rng, b.dimension());
                const MatrixXcd fast = apply_liouvillian({rho}, fmo_angular(), r, b, scale);
                const MatrixXcd slow = brute_force(rho, fmo_angular(), r, b, scale);
                CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + slow.cwiseAbs().maxCoeff()));
                CHECK(std::abs(fast.trace()) < 1e-10);
                CHECK((fast - fast.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
            }
        }
    }
}

TEST_CASE("init_oracle places n0 excitations on site 1") {
    const FockBasis b(2);
    const DensityMatrixState s = init_oracle(b, 2);
    const int k = b.index(Occupation{2, 0, 0, 0, 0, 0, 0, 0});
    CHECK(s.rho(k, k) == cplx(1.0, 0.0));
    CHECK(std::abs(s.rho.trace() - 1.0) < 1e-15);
    CHECK_THROWS_AS(init_oracle(b, 3), DomainError);
}

TEST_CASE("oracle trajectory stays a density matrix") {
    DecoherenceSpec r = DecoherenceSpec::null_with_sink(0.32);
    r.gamma_deph << 0.74, 24, 0, 5.2, 50.6, 0, 15;
    r.gamma_diss.setConstant(0.0005);
    const OracleResult res = simulate_oracle(oracle_config(1), fmo_angular(), r);
    CHECK(res.dimension == 9);
    CHECK(res.max_trace_error < 1e-9);
    CHECK(res.min_eigenvalue > -1e-7);
    // One excitation can never sit on site 3 and in the sink together.
    const auto& names = res.trajectory.aux_names;
    const auto col = std::find(names.begin(), names.end(), "n8n3") - names.begin();
    REQUIRE(col < static_cast<long>(names.size()));
    for (const auto& s : res.trajectory.samples) CHECK(std::abs(s.aux[col]) < 1e-14);
    CHECK(res.factorization_residual > 0.0);
    for (std::size_t i = 1; i < res.trajectory.samples.size(); ++i)
        CHECK(res.trajectory.samples[i].sink >= res.trajectory.samples[i - 1].sink - 1e-12);
}

TEST_CASE("without the sink the mean-field closure is exact") {
    std::mt19937_64 rng(8);
    for (int n0 : {1, 2}) {
        DecoherenceSpec r = random_rates(rng);
        r.sink = 0.0;
        const Trajectory exact = simulate_oracle(oracle_config(n0), fmo_angular(), r).trajectory;
        RunConfig mc = oracle_config(n0);
        mc.theory = Theory::meanfield;
        const Trajectory mf = simulate_meanfield(mc, fmo_angular(), r);
        REQUIRE(exact.samples.size() == mf.samples.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < mf.samples.size(); ++i)
            for (int j = 0; j < kSites; ++j)
                worst = std::max(worst, std::abs(exact.samples[i].populations[j] - mf.samples[i].populations[j]));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("one excitation with doubled hopping follows the amplitude equations") {
    DecoherenceSpec r;
    r.gamma_diss << 0.1, 0.2, 0.05, 0.0, 0.3, 0.1, 0.0;
    r.nl_diss(0, 1) = r.nl_diss(1, 0) = 0.02;
    OracleOptions opt;
    opt.hopping_scale = 2.0;
    RunConfig oc = oracle_config(1);
    oc.step = 0.000125;  // no dephasing: keep the near-pure state inside the eigenvalue floor
    const Trajectory exact = simulate_oracle(oc, fmo_angular(), r, opt).trajectory;
    RunConfig sc = oc;
    sc.theory = Theory::semiclassical;
    const Trajectory amp = simulate_semiclassical(sc, fmo_angular(), r);
    REQUIRE(exact.samples.size() == amp.samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < amp.samples.size(); ++i)
        for (int j = 0; j < kSites; ++j)
            worst = std::max(worst, std::abs(exact.samples[i].populations[j] - amp.samples[i].populations[j]));
    CHECK(worst < 1e-8);
}

TEST_CASE("simulate_oracle preconditions") {
    CHECK_THROWS_AS(simulate_oracle(oracle_config(3), fmo_angular(), DecoherenceSpec{}), CapacityError);
    RunConfig wrong = oracle_config(1);
    wrong.theory = Theory::meanfield;
    CHECK_THROWS_AS(simulate_oracle(wrong, fmo_angular(), DecoherenceSpec{}), DomainError);
    CHECK_THROWS_AS(simulate_oracle(oracle_config(1), build_fmo_hamiltonian(), DecoherenceSpec{}), UnitError);
}
