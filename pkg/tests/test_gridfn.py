"""Grid-sampled functions and the polynomial problem data."""

import types

import numpy as np
import pytest

from mixedpde.boundary import BoundaryData, validate_inputs
from mixedpde.gridfn import GridFunction, uniform_grid
from mixedpde.hyperbolic import derive_parameters


def test_cubic_interpolation_is_exact_on_cubics():
    nodes = uniform_grid(9)
    coef = np.array([0.3, -1.2, 0.7, 2.0])
    poly = np.polynomial.polynomial.Polynomial(coef)
    f = GridFunction(nodes, poly(nodes))
    rng = np.random.default_rng(7)
    xq = rng.uniform(0.0, 1.0, size=40)
    np.testing.assert_allclose(f(xq), poly(xq), atol=1e-14)


def test_scalar_query_returns_float_and_shape_is_preserved():
    f = GridFunction(uniform_grid(9), uniform_grid(9) ** 2)
    out = f(0.37)
    assert isinstance(out, float)
    xq = np.array([[0.1, 0.2], [0.3, 0.4]])
    assert f(xq).shape == (2, 2)


def test_short_grids_fall_back_to_linear():
    f = GridFunction(np.array([0.0, 1.0]), np.array([0.0, 2.0]))
    assert f(0.25) == pytest.approx(0.5)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridFunction(np.array([0.0, 0.5, 0.5, 1.0]), np.zeros(4))
    with pytest.raises(ValueError):
        GridFunction(np.array([0.0, 1.0]), np.zeros(3))


def test_with_values_keeps_nodes():
    f = GridFunction(uniform_grid(5), np.zeros(5))
    g = f.with_values(np.ones(5))
    np.testing.assert_array_equal(g.nodes, f.nodes)
    np.testing.assert_array_equal(g.values, np.ones(5))


def test_uniform_grid_endpoints_and_validation():
    g = uniform_grid(11)
    assert g[0] == 0.0 and g[-1] == 1.0 and len(g) == 11
    with pytest.raises(ValueError):
        uniform_grid(1)


def test_quartic_data_derivatives():
    data = BoundaryData(psi_coeffs=(0.0, 0.0, 0.0, 0.0, 1.0))
    x = np.linspace(0.0, 0.5, 6)
    np.testing.assert_allclose(data.psi(x), x ** 4, rtol=1e-15)
    np.testing.assert_allclose(data.psi_d3(x), 24.0 * x, rtol=1e-15)
    assert data.psi_d3_order() == 1
    # third derivative at the half-argument factors as s * const
    np.testing.assert_allclose(data.psi_d3_reduced(x), 12.0, rtol=1e-15)


def test_reduced_third_derivative_identity():
    # psi'''(s/2) = s**p * psi0(s) for a generic admissible polynomial
    rng = np.random.default_rng(3)
    coeffs = (0.0, 0.0, 0.0) + tuple(rng.standard_normal(3))
    data = BoundaryData(psi_coeffs=coeffs)
    p = data.psi_d3_order()
    s = rng.uniform(0.05, 1.0, size=20)
    np.testing.assert_allclose(
        data.psi_d3(s / 2.0), s ** p * data.psi_d3_reduced(s), rtol=1e-13)


def test_cubic_data_has_order_zero():
    data = BoundaryData(psi_coeffs=(0.0, 0.0, 0.0, 1.0))
    assert data.psi_d3_order() == 0
    np.testing.assert_allclose(data.psi_d3_reduced(0.0), 6.0)


def test_is_zero_and_degree_cap():
    assert BoundaryData().is_zero()
    assert not BoundaryData(psi_coeffs=(0.0, 0.0, 0.0, 0.0, 1.0)).is_zero()
    assert not BoundaryData(trace1_coeffs=(0.0, 1.0)).is_zero()
    with pytest.raises(ValueError):
        BoundaryData(psi_coeffs=(0.0,) * 14)


def test_validate_inputs_accepts_quartic_with_zero_traces():
    params = derive_parameters(-0.25, 0.5, 0.0)
    data = BoundaryData(psi_coeffs=(0.0, 0.0, 0.0, 0.0, 1.0))
    ok, problems = validate_inputs(params, data)
    assert ok and problems == []


def test_validate_inputs_flags_low_order_boundary_function():
    params = derive_parameters(-0.25, 0.5, 0.0)
    data = BoundaryData(psi_coeffs=(0.0, 0.0, 1.0))
    ok, problems = validate_inputs(params, data)
    assert not ok
    assert any("order 2" in msg for msg in problems)


def test_validate_inputs_flags_nonvanishing_traces():
    params = derive_parameters(-0.25, 0.5, 0.0)
    data = BoundaryData(psi_coeffs=(0.0, 0.0, 0.0, 0.0, 1.0),
                        trace1_coeffs=(1.0,))
    ok, problems = validate_inputs(params, data)
    assert not ok
    assert any("trace1" in msg for msg in problems)


def test_validate_inputs_flags_insufficient_regularity_exponent():
    # a cubic has exponent p=0, too small once beta drops below -1
    fake = types.SimpleNamespace(beta=-1.25)
    data = BoundaryData(psi_coeffs=(0.0, 0.0, 0.0, 1.0))
    ok, problems = validate_inputs(fake, data)
    assert not ok
    assert any("exponent" in msg for msg in problems)
