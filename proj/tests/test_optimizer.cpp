#include "fmo/errors.hpp"
#include "fmo/meanfield.hpp"
#include "fmo/nelder_mead.hpp"
#include "fmo/optimizer.hpp"

#include <doctest.h>

#include <cmath>

using namespace fmo;

namespace {

const SiteNetwork& fmo_angular() {
    static const SiteNetwork h = to_angular(build_fmo_hamiltonian());
    return h;
}

double rosenbrock(const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

} // namespace

// ---- simplex ----

TEST_CASE("nelder_mead finds the Rosenbrock minimum") {
    const SimplexResult r = nelder_mead_minimize(rosenbrock, {-1.2, 1.0}, {0.5, 0.5});
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.value < 1e-8);
}

TEST_CASE("nelder_mead respects the evaluation budget") {
    int calls = 0;
    auto counted = [&](const std::vector<double>& x) {
        ++calls;
        return rosenbrock(x);
    };
    SimplexOptions opt;
    opt.max_evaluations = 37;
    const SimplexResult r = nelder_mead_minimize(counted, {-1.2, 1.0}, {0.5, 0.5}, opt);
    CHECK(calls <= 37);
    CHECK(r.evaluations == calls);
    CHECK_FALSE(r.converged);
    CHECK(r.value <= rosenbrock({-1.2, 1.0}));
}

TEST_CASE("nelder_mead on a separable quadratic in four dimensions") {
    auto q = [](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * std::pow(x[i] - 0.5 * i, 2);
        return s;
    };
    const SimplexResult r = nelder_mead_minimize(q, {3, 3, 3, 3}, {1, 1, 1, 1});
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(r.x[i] - 0.5 * i) < 1e-6);
}

// ---- rate vectors and objective ----

TEST_CASE("pack and unpack rate vectors") {
    const RateVector v{0.74, 24, 0, 5.2, 50.6, 0, 15, 0.32};
    const DecoherenceSpec s = unpack_rates(v);
    CHECK(s.sink == 0.32);
    CHECK(s.gamma_deph(4) == 50.6);
    for (int j = 0; j < kSites; ++j) CHECK(s.gamma_diss(j) == kPinnedDissipation);
    CHECK(s.nl_deph.isZero());
    CHECK(s.nl_diss.isZero());
    CHECK(pack_rates(s) == v);
    CHECK(unpack_rates(v, 0.1).gamma_diss(2) == 0.1);
}

TEST_CASE("objective is the mean-field efficiency") {
    const RateVector v{0.74, 24, 0, 5.2, 50.6, 0, 15, 0.32};
    RunConfig c;
    c.theory = Theory::semiclassical;  // ignored by the objective
    const double eff = objective(v, c, fmo_angular());
    c.theory = Theory::meanfield;
    CHECK(eff == simulate_meanfield(c, fmo_angular(), unpack_rates(v)).final_efficiency);
    CHECK(std::abs(eff - 0.9177) < 1e-3);
    RateVector bad = v;
    bad[2] = -1.0;
    CHECK_THROWS_AS(objective(bad, c, fmo_angular()), DomainError);
}

TEST_CASE("optimizer start points are seeded and positive") {
    const auto a = optimizer_starts(5, 42);
    const auto b = optimizer_starts(5, 42);
    const auto c = optimizer_starts(5, 43);
    REQUIRE(a.size() == 5);
    CHECK(a == b);
    CHECK(a != c);
    for (const auto& s : a)
        for (double x : s) CHECK(x > 0.0);
}

TEST_CASE("a short optimization is deterministic and monotone") {
    RunConfig c;
    c.n0 = 100;
    c.horizon = 2.0;
    OptimizerOptions opt;
    opt.starts = 2;
    opt.max_evaluations = 40;
    const OptimizationResult r1 = optimize_dephasing(c, fmo_angular(), opt);
    const OptimizationResult r2 = optimize_dephasing(c, fmo_angular(), opt);
    CHECK(r1.best_vector == r2.best_vector);
    CHECK(r1.best_efficiency == r2.best_efficiency);
    CHECK(r1.evaluations <= 2 * 40);
    REQUIRE(r1.starts.size() == 2);
    REQUIRE_FALSE(r1.trace.empty());
    for (std::size_t i = 1; i < r1.trace.size(); ++i) {
        CHECK(r1.trace[i].efficiency > r1.trace[i - 1].efficiency);
        CHECK(r1.trace[i].evaluation > r1.trace[i - 1].evaluation);
    }
    // The reported optimum is re-simulated at the caller's step.
    CHECK(r1.best_efficiency == doctest::Approx(objective(r1.best_vector, c, fmo_angular())).epsilon(1e-12));
    for (double x : r1.best_vector) CHECK(x >= 0.0);
}

// ---- sweeps ----

TEST_CASE("linear_range is inclusive and drift-free") {
    const auto r = linear_range(0.0, 1.0, 0.1);
    REQUIRE(r.size() == 11);
    CHECK(r[3] == 0.0 + 3 * 0.1);
    CHECK(r.back() == doctest::Approx(1.0));
    CHECK(linear_range(2.0, 2.0, 0.5).size() == 1);
    CHECK_THROWS_AS(linear_range(0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(linear_range(1.0, 0.0, 0.1), DomainError);
}

TEST_CASE("sweep parameter names") {
    CHECK(is_sweep_parameter("sink"));
    CHECK(is_sweep_parameter("n0"));
    CHECK(is_sweep_parameter("gamma_deph.7"));
    CHECK(is_sweep_parameter("nl_deph.2.5"));
    CHECK(is_sweep_parameter("uniform_local_deph"));
    CHECK_FALSE(is_sweep_parameter("gamma_deph.8"));
    CHECK_FALSE(is_sweep_parameter("nl_deph.3.3"));
    CHECK_FALSE(is_sweep_parameter("bogus"));

    DecoherenceSpec r;
    RunConfig c;
    apply_sweep_value("nl_deph.2.5", 3.0, r, c);
    CHECK(r.nl_deph(1, 4) == 3.0);
    CHECK(r.nl_deph(4, 1) == 3.0);
    apply_sweep_value("uniform_local_deph", 2.0, r, c);
    CHECK(r.gamma_deph.isConstant(2.0));
    apply_sweep_value("uniform_nl_deph", 1.5, r, c);
    CHECK(r.nl_deph(0, 6) == 1.5);
    CHECK(r.nl_deph(3, 3) == 0.0);
    apply_sweep_value("n0", 500, r, c);
    CHECK(c.n0 == 500);
    CHECK_THROWS_AS(apply_sweep_value("n0", 2.5, r, c), DomainError);
    CHECK_THROWS_AS(apply_sweep_value("bogus", 1.0, r, c), DomainError);
}

TEST_CASE("sink sweep reproduces the null-decoherence efficiencies") {
    RunConfig c;
    const SweepTable t = sweep({"sink"}, {0.32, 0.9}, DecoherenceSpec{}, c, fmo_angular());
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].value == 0.32);
    CHECK(std::abs(t.rows[0].efficiency - 0.6073) < 1e-3);
    CHECK(std::abs(t.rows[1].efficiency - 0.6706) < 1e-3);
    CHECK(t.best().value == 0.9);
}
