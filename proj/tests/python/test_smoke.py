"""Smoke tests for the wtbouss python module."""

import math

import numpy as np
import pytest

import wtbouss as wt


@pytest.fixture
def grid():
    return wt.GridSpec(32, 32, 2 * math.pi, 2 * math.pi)


def xy(grid):
    x = np.arange(grid.nx) * grid.lx / grid.nx
    y = np.arange(grid.ny) * grid.ly / grid.ny
    return np.meshgrid(x, y, indexing="ij")


def test_symbol_values():
    assert wt.lambda1(2.0, 1.0, 0.12) == pytest.approx(2.0473003598341237, rel=1e-12)
    assert wt.lambda2(1.0, 0.0, 0.3) == pytest.approx(math.sqrt(1.05 / 1.15), rel=1e-12)


def test_transform_roundtrip(grid):
    rng = np.random.default_rng(7)
    f = rng.standard_normal((grid.nx, grid.ny))
    assert wt.transform_roundtrip_error(grid, f) < 1e-12 * np.abs(f).max()


def test_dealiased_product_identity(grid):
    x, _ = xy(grid)
    f = np.cos(x)
    prod = wt.dealiased_product(grid, f, f)
    assert np.allclose(prod, 0.5 * (1 + np.cos(2 * x)), atol=1e-12)


def test_params_and_validation():
    p = wt.ModelParams.case1(0.1)
    rep = wt.validate_params(p)
    assert rep.constraint_ok
    assert rep.curl_free_ok
    assert "constraint ok" in rep.summary()


def test_rhs_zero_state(grid):
    z = np.zeros((grid.nx, grid.ny))
    s = wt.State(grid, z, z, z)
    dv, dw, dz = wt.rhs(wt.SystemId.Case1, s, wt.ModelParams.case1(0.1))
    assert np.abs(dv).max() == 0.0
    assert np.abs(dz).max() == 0.0


def test_rhs_single_mode_oracle():
    g = wt.GridSpec(64, 64, 2 * math.pi, 2 * math.pi)
    x, _ = xy(g)
    zeros = np.zeros_like(x)
    s = wt.State(g, np.cos(x), zeros, zeros)
    dv, dw, dz = wt.rhs(wt.SystemId.Case1, s, wt.ModelParams.case1(0.1))
    coef = 0.05 / (1 + 0.1 / 3 * 4)
    assert np.allclose(dv, coef * np.sin(2 * x), atol=1e-12)
    assert np.allclose(dz, np.sin(x), atol=1e-12)


def test_ptheta_round_trip(grid):
    s = wt.random_curl_free_state(wt.CaseTag.Case2, grid, 0.15, 5, 0.3, 42)
    assert wt.curl_residual(s, 0.15, False) < 1e-12
    p, theta = wt.to_ptheta(wt.CaseTag.Case2, s, 0.15)
    back = wt.from_ptheta(wt.CaseTag.Case2, grid, p, theta, 0.15)
    assert np.allclose(back.v, s.v, atol=1e-12 * np.abs(s.v).max())
    assert np.allclose(back.zeta, s.zeta, atol=1e-12 * np.abs(s.zeta).max())


def test_gamma_identity(grid):
    rng = np.random.default_rng(3)
    s = wt.random_curl_free_state(wt.CaseTag.Case2, grid, 0.2, 5, 0.3, 9)
    zeta = np.asarray(s.zeta)
    f = np.asarray(wt.random_curl_free_state(wt.CaseTag.Case2, grid, 0.2, 5, 0.3, 10).v)
    Gamma, gamma, factor = wt.gamma_apply(grid, zeta, f, 0.2)
    zf = wt.dealiased_product(grid, zeta, f)
    assert np.abs(gamma + Gamma - zf).max() <= 1e-10 * max(1.0, np.abs(zf).max())
    assert factor < 0.5


def test_energy_and_sobolev(grid):
    x, _ = xy(grid)
    f = np.cos(x)
    # weight <(1,0)>^2 = 2 at s = 1: sqrt(2) * sqrt(2 pi^2) = 2 pi
    assert wt.sobolev_norm(grid, f, 1.0) == pytest.approx(2 * math.pi, rel=1e-12)
    z = np.zeros_like(f)
    s = wt.State(grid, f, z, z)
    rep = wt.energy(wt.CaseTag.Case1, s, 0.0, 0.0)
    assert rep.e_total == pytest.approx(4 * math.pi**2, rel=1e-12)


def test_zeta_tilde(grid):
    two = np.full((grid.nx, grid.ny), 2.0)
    zt = wt.zeta_tilde(grid, two, 0.1)
    assert np.allclose(zt, 1.9, atol=1e-13)


def test_dispersion_quick():
    g = wt.GridSpec(16, 16, 2 * math.pi, 2 * math.pi)
    r = wt.dispersion_check(wt.SystemId.Case1, wt.ModelParams.case1(0.12), g, 2, 1, T=2.0)
    assert r.predicted == pytest.approx(2.0473003598341237, rel=1e-12)
    assert r.rel_err < 1e-6


def test_integrate_short():
    cfg = wt.RunConfig()
    cfg.system = wt.SystemId.Case1
    cfg.params = wt.ModelParams.case1(0.1)
    cfg.grid = wt.GridSpec(16, 16, 2 * math.pi, 2 * math.pi)
    cfg.t_end = 0.5
    cfg.amplitude = 0.05
    cfg.diag_every = 5
    res = wt.integrate(cfg)
    assert res.ok
    assert len(res.records) >= 2
    times = [r.time for r in res.records]
    assert times == sorted(times)
    assert res.records[-1].energy.e_total > 0


def test_consistency_residual_zero():
    g = wt.GridSpec(16, 16, 2 * math.pi, 2 * math.pi)
    z = np.zeros((g.nx, g.ny))
    s = wt.State(g, z, z, z)
    r1, r2, r3, total = wt.consistency_residual(s, wt.ModelParams.case2(0.1))
    assert total == 0.0


def test_invalid_arguments_raise():
    with pytest.raises(ValueError):
        wt.GridSpec(15, 16, 1.0, 1.0)
    g = wt.GridSpec(16, 16, 2 * math.pi, 2 * math.pi)
    with pytest.raises(ValueError):
        wt.from_ptheta(wt.CaseTag.Case1, g, np.ones((16, 16)), np.zeros((16, 16)), 0.1)
