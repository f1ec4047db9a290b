import math
import os
import subprocess

import numpy as np
import pytest

import emitcorr as ec


def test_bell_diagonal_values():
    rho = ec.bell_diagonal(0.8, 0.8, -0.6)
    r = ec.correlations(rho)
    assert r["MI"] == pytest.approx(1.07807, abs=1e-5)
    assert r["CC"] == pytest.approx(0.53100, abs=1e-5)
    assert r["QD"] == pytest.approx(0.54707, abs=1e-5)
    assert r["QD"] + r["CC"] == pytest.approx(r["MI"], abs=1e-12)


def test_couplings_parallel_transverse():
    V, gamma = ec.couplings(ec.EmitterGeometry.parallel_transverse(0.108))
    assert V == pytest.approx(2.03, rel=0.02)
    assert gamma == pytest.approx(0.91, rel=0.02)


def test_propagate_matches_analytic():
    p = ec.SystemParams(V=2.03, gamma=0.91)
    times, states = ec.propagate(ec.alpha_state(0.3, math.pi / 2), p, 5.0, 11)
    assert len(times) == 11 and len(states) == 11
    for t, rho in zip(times, states):
        assert rho.shape == (4, 4)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(rho, ec.analytic_evolution(0.3, math.pi / 2, p, t), atol=1e-8)


def test_stationary_state_is_fixed_point():
    p = ec.SystemParams(V=10.45, gamma=0.97, ell1=10.0, ell2=10.0)
    rho = ec.stationary_state(p)
    assert np.abs(ec.lindblad_rhs(rho, p)).max() < 1e-10


def test_pure_state_measures():
    rho = ec.alpha_state(0.5, 0.0)
    assert ec.concurrence(rho) == pytest.approx(1.0, abs=1e-12)
    assert ec.eof(rho) == pytest.approx(1.0, abs=1e-12)
    assert ec.mutual_information(rho) == pytest.approx(2.0, abs=1e-12)


def test_errors_carry_kind():
    with pytest.raises(ec.Error) as info:
        ec.bell_diagonal(1.0, 1.0, 1.0)
    assert info.value.args[1] == "invalid-bell-diagonal"
    with pytest.raises(ValueError):
        ec.correlations(np.eye(4) * 0.3)


def test_run_scenario_text():
    header, rows = ec.run_scenario(
        "initial.kind = doubly_excited\nparams.V = 1.2791\nparams.gamma = 0.8805\n"
        "time.t_final = 2\ntime.samples = 5\n"
    )
    assert header[:3] == ["t", "MI", "CC"]
    assert len(rows) == 5
    assert rows[0][1] == 0.0


@pytest.mark.skipif("EMITCORR_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_couplings(tmp_path):
    geo = tmp_path / "g.txt"
    geo.write_text("geometry.r12 = 0.125\n")
    out = subprocess.run([os.environ["EMITCORR_CLI"], "couplings", str(geo)], capture_output=True, text=True)
    assert out.returncode == 0
    assert "V" in out.stdout
