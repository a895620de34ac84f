import numpy as np
import pytest

import fmo_transfer as fmo


def test_hamiltonian_units():
    h = fmo.build_fmo_hamiltonian()
    assert h.unit == fmo.Unit.wavenumber
    assert h.elements.shape == (7, 7)
    assert np.allclose(h.elements, h.elements.T)
    assert fmo.to_angular(h).elements[0, 0] == pytest.approx(h.elements[0, 0] / 5.3)


def test_meanfield_optimum():
    t = fmo.simulate(fmo.RunConfig(), fmo.optimal_rates())
    assert t.final_efficiency == pytest.approx(0.9177, abs=1e-3)
    assert t.populations.shape == (501, 7)
    assert len(t.times) == 501
    assert t.sink[-1] / t.n0 == pytest.approx(t.final_efficiency)
    assert "hermiticity_drift" in t.aux


def test_semiclassical_and_oracle():
    cfg = fmo.RunConfig(theory=fmo.Theory.semiclassical)
    assert cfg.step == 0.0005
    t = fmo.simulate(cfg, fmo.DecoherenceSpec.null_with_sink(1.94))
    assert t.final_efficiency == pytest.approx(0.625, abs=0.005)

    o = fmo.simulate_oracle(fmo.RunConfig(n0=1, theory=fmo.Theory.oracle, horizon=1.0), fmo.optimal_rates())
    assert o.dimension == 9
    assert o.max_trace_error < 1e-8
    assert o.factorization_residual >= 0.0


def test_validation_and_errors():
    r = fmo.DecoherenceSpec()
    nl = np.zeros((7, 7))
    nl[0, 1] = 1.0
    r.nl_diss = nl
    v = fmo.validate_rates(r)
    assert not v.ok()
    assert v.violations[0].entry == "nl_diss.1.2"
    with pytest.raises(fmo.CapacityError):
        fmo.simulate_oracle(fmo.RunConfig(n0=3, theory=fmo.Theory.oracle), r)
    with pytest.raises(ValueError):
        fmo.transfer_efficiency(1.0, 0)


def test_sweep_and_objective():
    table = fmo.sweep(["sink"], [0.32, 0.9], fmo.DecoherenceSpec(), fmo.RunConfig())
    effs = [row.efficiency for row in table.rows]
    assert effs == pytest.approx([0.6073, 0.6706], abs=1e-3)
    assert table.best().value == 0.9
    vec = list(fmo.OPTIMAL_DEPHASING) + [0.32]
    assert fmo.objective(vec, fmo.RunConfig()) == pytest.approx(0.9177, abs=1e-3)


def test_short_optimization():
    opts = fmo.OptimizerOptions()
    opts.starts = 1
    opts.max_evaluations = 20
    res = fmo.optimize_dephasing(fmo.RunConfig(horizon=1.0), opts)
    assert res.evaluations <= 20
    assert 0.0 < res.best_efficiency <= 1.0


def test_run_config_text(tmp_path):
    status, summary, files = fmo.run_config_text("scenario = simulate\nhorizon = 0.5\nsink = 0.9\n", str(tmp_path), "x")
    assert status == 0
    assert (tmp_path / "x_trajectory.csv").exists()
    with pytest.raises(fmo.ParseError):
        fmo.run_config_text("warp = 1\n", str(tmp_path))
