import math

import numpy as np
import pytest

import bllimit


def test_constants_and_closures():
    c = bllimit.derive_constants()
    assert c.T0 == pytest.approx(288.15 + 16 / 2008, rel=1e-15)
    cl = bllimit.ClosureSet(c)
    assert cl.sigma(0.0) == 1.0
    assert cl.total_energy(-3.0) == pytest.approx(c.i0, rel=1e-15)
    assert cl.viscosity(4.0) == pytest.approx(1.789e-5, rel=1e-14)


def test_limit_profile():
    p = bllimit.solve_limit_profile(0.2, n=256)
    assert isinstance(p["u"], np.ndarray)
    assert p["u"][0] == 0.0 and p["u"][-1] == -4.0
    assert p["residual_max"] <= 1e-6
    lin = bllimit.solve_limit_profile(0.2, n=64, exponent=0.0)
    assert np.max(np.abs(lin["u"] + 4.0 * lin["y"] / 0.2)) <= 1e-12


def test_adim_and_transform():
    r = bllimit.solve_adim(0.1, n_s=17, n_t=24)
    assert r["u"].shape == (17, 24)
    assert r["report"]["converged"]
    assert np.all(r["u"][:, -1] == -4.0)
    t = bllimit.transform_check(0.1, n_s=17, n_t=24)
    assert t["satisfied"]
    assert t["f2_boundary_max"] <= 1e-10


def test_sweep_rows():
    out = bllimit.run_sweep(eps_values=[0.2, 0.1], n_s=17, n_t=24)
    assert [row["eps"] for row in out["rows"]] == [0.2, 0.1]
    assert all(row["energy_lhs"] <= row["energy_rhs"] for row in out["rows"])


def test_errors_carry_kind():
    gas = bllimit.GasParameters()
    gas.b = 0.9
    with pytest.raises(bllimit.Error) as info:
        bllimit.derive_constants(gas)
    assert info.value.kind == "InvalidPolytropicExponent"
    with pytest.raises(bllimit.Error) as info:
        bllimit.load_config("/definitely/not/here.ini")
    assert info.value.kind == "IoError"


def test_g_integral_is_odd():
    c = bllimit.derive_constants()
    u = 0.5 * math.sqrt(2 * c.i0)
    assert bllimit.g_integral(-u, c.i0) == -bllimit.g_integral(u, c.i0)
