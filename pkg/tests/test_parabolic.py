"""Upper-domain kernel machinery: profile, fundamental solution, field."""

import math

import numpy as np
import pytest

from mixedpde.hyperbolic import derive_parameters
from mixedpde.parabolic import (HeatGreen, decay_profile, fundamental_solution,
                                pde_residual_parabolic, u_parabolic)

# mpmath references: profile series at 200 dps, kernel integral at 50 dps
PROFILE_REF = {
    (0.25, 0.5): 0.07099610235509619703299,
    (0.25, 2.0): 0.08062554172729292795252,
    (0.25, 5.0): 0.00911162134063333290341,
    (0.25, 10.0): 3.177053279141436163315e-05,
    (0.25, 33.5): 1.313348593860856394482e-22,
}

FUNDAMENTAL_REF = {
    # (x, y, lambda2) -> value at alpha=-0.25, delta=0.5
    (0.4, 0.3, 1.0): 0.14910753529193413413,
    (0.4, 0.3, -1.0): 0.82824104253337106484,
    (0.0, 0.1, 1.0): 0.50445408210799036872,
    (0.3, 0.05, -1.0): 1.6777658760321022642,
    (0.1, 1.0, 1.0): 0.04319205002237734645,
}

# Gamma(d) y^(d-1) E_{d,d}(-mu y^d) sin(pi x) with mu = pi^2 + lambda2,
# d = 1/2; separated solution of the upper-domain equation whose scaled
# interface limit is sin(pi x)
SEPARATED_REF = {
    (0.0, 0.25, 0.1): 0.1005009176403107010097,
    (0.0, 0.25, 0.5): 0.009964970865439804178228,
    (0.0, 0.25, 1.0): 0.003575066309872506589221,
    (0.0, 0.5, 0.1): 0.1421297607578688260333,
    (0.0, 0.5, 0.5): 0.01409259694655772945482,
    (0.0, 0.5, 1.0): 0.005055907261804832848762,
    (1.0, 0.25, 0.1): 0.08460380095867273738395,
    (1.0, 0.25, 0.5): 0.008257618051856049161335,
    (1.0, 0.25, 1.0): 0.002955243352482086449113,
    (1.0, 0.5, 0.1): 0.1196478427440688459755,
    (1.0, 0.5, 0.5): 0.01167803544183172040574,
    (1.0, 0.5, 1.0): 0.004179345229193099681207,
    (-1.0, 0.25, 0.1): 0.1211269651010783974667,
    (-1.0, 0.25, 0.5): 0.0122549526916048538674,
    (-1.0, 0.25, 1.0): 0.004411057648393561735878,
    (-1.0, 0.5, 0.1): 0.1712993968150376414782,
    (-1.0, 0.5, 0.5): 0.01733112030270825005684,
    (-1.0, 0.5, 1.0): 0.006238177550767746288958,
}


def params_for(lam2, delta=0.5):
    return derive_parameters(-0.25, delta, lam2, _validate=delta < 1.0)


def test_decay_profile_frozen_reference_values():
    prof = decay_profile(0.25)
    for (_, s), ref in PROFILE_REF.items():
        got = prof(s)
        assert abs(got - ref) < 1e-9, (s, got, ref)


def test_decay_profile_envelope_dominates_the_values():
    prof = decay_profile(0.25)
    rng = np.random.default_rng(61)
    s = rng.uniform(0.0, 30.0, size=40)
    vals = np.abs(prof(s))
    envs = np.array([prof.envelope(v) for v in s])
    assert np.all(vals <= envs)


def test_fundamental_solution_frozen_reference_values():
    for (x, y, lam2), ref in FUNDAMENTAL_REF.items():
        got = fundamental_solution(params_for(lam2), x, y)
        np.testing.assert_allclose(got, ref, rtol=1e-12)


def test_table_path_matches_the_reference_path():
    for (x, y, lam2), ref in FUNDAMENTAL_REF.items():
        hg = HeatGreen(params_for(lam2))
        got = float(hg.gamma(np.array([x]), y)[0])
        # the shared-node table reads back through cubic interpolation on
        # a step-1/64 grid; that costs a few 1e-9 relative at small s0
        np.testing.assert_allclose(got, ref, rtol=2e-8)


def test_unit_order_reduces_to_the_exponentially_damped_heat_kernel():
    # delta = 1: the kernel is exp(-lambda2*y) times the Gauss kernel
    p = params_for(1.0, delta=1.0)
    got = fundamental_solution(p, 0.2, 0.1)
    np.testing.assert_allclose(got, 0.73035864060117353616, rtol=1e-10)


def test_green_function_images_cancel_on_the_walls():
    hg = HeatGreen(params_for(1.0))
    ts = np.linspace(0.1, 0.9, 9)
    for ylev in (0.05, 0.3, 1.0):
        at0 = hg.green(np.zeros_like(ts), ts, ylev)
        at1 = hg.green(np.ones_like(ts), ts, ylev)
        assert np.max(np.abs(at0)) < 1e-12
        assert np.max(np.abs(at1)) < 1e-12


def test_green_function_positive_inside_the_strip():
    hg = HeatGreen(params_for(0.0))
    xs = np.linspace(0.1, 0.9, 9)
    vals = hg.green(xs, np.full_like(xs, 0.4), 0.2)
    assert np.all(vals > 0.0)


def test_separated_solution_frozen_reference_values():
    trace = lambda t: np.sin(np.pi * np.asarray(t, dtype=float))
    for lam2 in (0.0, 1.0, -1.0):
        p = params_for(lam2)
        hg = HeatGreen(p)
        for (l2, x, y), ref in SEPARATED_REF.items():
            if l2 != lam2:
                continue
            got = float(u_parabolic(p, hg, trace, np.array([x]), y)[0])
            np.testing.assert_allclose(got, ref, rtol=1e-5)


def test_scaled_trace_recovered_by_interface_extrapolation():
    # y**(1-delta) u is a polynomial-like function of w = y**delta near
    # the interface; extrapolating a few levels to w = 0 must return the
    # driving trace
    trace = lambda t: np.sin(np.pi * np.asarray(t, dtype=float))
    xs = np.linspace(0.1, 0.9, 9)
    ws = np.linspace(0.015, 0.18, 12)
    for lam2 in (0.0, 1.0, -1.0):
        p = params_for(lam2)
        hg = HeatGreen(p)
        ys = ws ** (1.0 / p.delta)
        rows = np.vstack([yv ** (1.0 - p.delta)
                          * u_parabolic(p, hg, trace, xs, float(yv))
                          for yv in ys])
        coef = np.polynomial.polynomial.polyfit(ws, rows, deg=len(ws) - 1)
        err = float(np.max(np.abs(coef[0] - trace(xs))))
        assert err < 1e-3, (lam2, err)


def test_pde_residual_small_on_the_separated_solution():
    trace = lambda t: np.sin(np.pi * np.asarray(t, dtype=float))
    p = params_for(1.0)
    hg = HeatGreen(p)

    def u_pt(xq, yq):
        return float(u_parabolic(p, hg, trace, np.array([xq]), float(yq))[0])

    y_grid = np.linspace(0.0, 0.3, 31)
    ys, res = pde_residual_parabolic(p, u_pt, trace, 0.3, y_grid)
    u_line = np.array([abs(u_pt(0.3, yy)) for yy in ys])
    # the product-integration error concentrates at the interface where
    # the solution blows up like y**(delta-1); judge the scaled residual
    # away from the first few nodes, like the solver diagnostic does
    assert float(np.max(np.abs(res[4:]))) / float(np.max(u_line)) < 1e-1


def test_fundamental_solution_rejects_nonpositive_time():
    with pytest.raises(ValueError):
        fundamental_solution(params_for(0.0), 0.2, 0.0)
    with pytest.raises(ValueError):
        HeatGreen(params_for(0.0)).table(-0.5)
