import math

import numpy as np
import pytest

import ultraflow as uf


def test_thresholds():
    p_sharp, p_crit = uf.thresholds(3.0)
    assert p_sharp == pytest.approx(4.75, abs=1e-14)
    assert p_crit == pytest.approx(6.0, abs=1e-14)


def test_range_collapses_at_critical_exponent():
    r = uf.m_range(4.0, 4.0)
    assert r["m_minus"] == pytest.approx(0.75, abs=1e-12)
    assert r["m_plus"] == pytest.approx(0.75, abs=1e-12)


def test_delta_at_zero_is_one():
    assert uf.delta_of_beta(0.0, 2.7, 5.1)["delta"] == 1.0


def test_interior_beta():
    assert uf.interior_beta(2.5, 5.0) == pytest.approx(2.0)


def test_figure1_rows():
    rows = uf.figure1_table(3.0, 1.05, 6.0, 10)
    assert len(rows) == 11
    assert rows[-1][0] == 6.0


def test_deficit_constant_and_extremal():
    assert abs(uf.deficit("const(2)", 3.0, 4.0)["deficit"]) < 1e-10
    assert abs(uf.deficit("fab(1,0.5)", 4.0, 4.0)["deficit"]) < 1e-8


def test_deficit_accepts_callable():
    d = uf.deficit(lambda z: 1.0 + 0.3 * z - 0.2 * z**2, 2.5, 3.0)
    assert d["deficit"] >= -1e-10
    assert d["lambda"] == 2.5


def test_logsob_at_p2():
    assert uf.deficit("exp(0.4*z)", 3.0, 2.0)["deficit"] > 0.0


def test_nodes():
    z = uf.nodes(3.0, 16)
    assert z.shape == (16,)
    assert np.all(np.abs(z) < 1.0)


def test_nonlinear_flow():
    tr = uf.run_flow("nonlinear", 4.0, 3.8, t_end=0.5)
    F = np.asarray(tr["F"])
    assert not tr["aborted"]
    assert np.all(np.diff(F) <= 1e-9 * np.abs(F[:-1]) + 1e-12)
    mass = np.asarray(tr["mass"])
    assert abs(mass[-1] / mass[0] - 1.0) < 1e-10


def test_heat_flow_trace():
    tr = uf.run_flow("heat", 3.0, 3.0, u0="exp(0.2*z)", t_end=0.1, dt=0.01)
    assert len(tr["t"]) == 11
    assert tr["beta"] == 1.0


def test_identities():
    res = uf.identity_sweep(1.5, 0.1, trials=5, seed=3)
    assert set(res) >= {"gamma2", "lgamma"}
    assert max(res.values()) < 1e-8


def test_errors():
    with pytest.raises(uf.DomainError):
        uf.run_flow("sideways", 3.0, 3.0)
    with pytest.raises(uf.Error):
        uf.deficit("1 +", 3.0, 3.0)
    assert math.isfinite(uf.m_range(3.0, 4.0)["A"])
