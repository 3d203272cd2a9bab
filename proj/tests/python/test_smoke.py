import cmath
import math

import numpy as np
import pytest

import nonstatq as nq


def test_glauber_pair():
    eps, deps = nq.glauber_initial_conditions(4.0)
    assert eps == pytest.approx(0.5)
    assert deps == pytest.approx(2j)


def test_closed_forms():
    s = nq.stationary_envelope(1.0, math.pi / 2)
    assert abs(s.eps - 1j) < 1e-15
    assert abs(nq.wronskian(s) + 2j) < 1e-14
    h = nq.hyperbolic_decay_envelope(1.0, math.e - 1.0)
    assert h.rho == pytest.approx(math.sqrt(math.e / (math.sqrt(3) / 2)), rel=1e-14)
    assert abs(nq.ermakov_residual(h)) < 1e-10


def test_domain_errors_map_to_python():
    with pytest.raises(nq.DomainError):
        nq.stationary_envelope(0.0, 1.0)
    with pytest.raises(nq.ConfigError, match="sigma"):
        nq.parse_scenario_string("[medium]\nsgima = 0.2\n")
    assert issubclass(nq.ConfigError, nq.Error)


def test_vacuum_moments_and_photon_statistics():
    s = nq.stationary_envelope(1.0, 0.7)
    m = nq.quadrature_moments(s)
    assert m.var_q == pytest.approx(0.5)
    assert m.var_p == pytest.approx(0.5)
    assert abs(nq.rs_residual(m)) < 1e-15
    st = nq.photon_statistics(nq.invariant_coefficients(s), 2.0)
    assert st.mean_n == pytest.approx(4.0)
    assert abs(st.mandel_q) < 1e-12


def test_ground_state_is_normalized():
    s = nq.stationary_envelope(1.0, 0.0)
    q = np.linspace(-10, 10, 4001)
    density = np.array([abs(nq.psi(x, s)) ** 2 for x in q])
    assert np.trapezoid(density, q) == pytest.approx(1.0, abs=1e-10)


def test_builtin_trajectories():
    builtins = {c.name: c for c in nq.builtin_scenarios()}
    assert set(builtins) == {"vacuum", "stationary-conductive", "hyperbolic-decay"}
    cfg = builtins["stationary-conductive"]
    traj = nq.integrate(cfg)
    assert traj["t"].shape == (cfg.n_points,)
    assert traj["eps"].dtype == np.complex128
    assert traj["max_wronskian_drift"] < 1e-7
    assert np.all(np.diff(traj["t"]) > 0)
    np.testing.assert_allclose(traj["lambda"], 0.2 * traj["t"], atol=1e-12)
    np.testing.assert_allclose(traj["rho"], 0.99 ** -0.25, rtol=1e-9)
    fm = nq.field_moments(nq.exact_sample(cfg, 1.0))
    assert abs(fm.rs_residual_field) < 1e-12
    assert all(row["passed"] for row in nq.check(cfg))


def test_run_writes_artifacts(tmp_path):
    cfg = nq.parse_scenario_string(
        'name = "py"\n[medium]\nsigma = 0.1\n[time]\nt_end = 2.0\nn_points = 41\n'
        '[tolerances]\node_abs = 1e-12\node_rel = 1e-12\n'
        '[outputs]\nselect = ["envelope", "quadratures", "checks"]\n'
    )
    summary = nq.run(cfg, tmp_path)
    assert summary["passed"], summary["failures"]
    assert (tmp_path / "envelope.csv").exists()
    assert "envelope.csv" in summary["checksums"]
    phase = cmath.phase(nq.integrate(cfg)["eps"][-1])
    assert math.isfinite(phase)
