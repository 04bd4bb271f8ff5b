"""Gauss rules on [0,1] and the weakly singular product weights."""

import math

import numpy as np
import pytest
from scipy.special import beta as beta_fn

from mixedpde.quadrature import (QuadratureRule, gauss_jacobi, gauss_legendre,
                                 product_weights)


def test_gauss_legendre_exact_through_degree_2n_minus_1():
    for n in (2, 5, 12):
        rule = gauss_legendre(n)
        for m in range(2 * n):
            got = rule.integrate(lambda u, m=m: u ** m)
            np.testing.assert_allclose(got, 1.0 / (m + 1.0), rtol=1e-13)


def test_gauss_jacobi_moments_match_beta_function():
    # int_0^1 u^m (1-u)^a u^b du = B(a+1, b+m+1)
    for a, b in ((-0.75, 0.0), (0.5, -0.25), (1.5, 1.5), (0.0, -0.5)):
        rule = gauss_jacobi(10, a, b)
        for m in range(8):
            got = rule.integrate(lambda u, m=m: u ** m)
            np.testing.assert_allclose(got, beta_fn(a + 1.0, b + m + 1.0),
                                       rtol=1e-12)


def test_gauss_jacobi_zero_exponents_is_legendre():
    assert gauss_jacobi(7, 0.0, 0.0) is gauss_legendre(7)


def test_gauss_rules_reject_bad_parameters():
    with pytest.raises(ValueError):
        gauss_jacobi(4, -1.0, 0.0)
    with pytest.raises(ValueError):
        gauss_legendre(0)


def test_quadrature_rule_validates_mass():
    rule = gauss_legendre(4)
    with pytest.raises(ValueError):
        QuadratureRule(nodes=rule.nodes, weights=2.0 * rule.weights,
                       weight_exponents=(0.0, 0.0))


def test_product_weights_exact_on_piecewise_linear():
    rng = np.random.default_rng(7241)
    for sigma in (-0.5, -0.25, -0.9):
        grid = np.sort(rng.uniform(0.02, 1.0, size=14))
        grid = np.concatenate([[0.0], grid])
        tw = product_weights(grid, sigma)
        for _ in range(4):
            c0, c1 = rng.normal(size=2)
            vals = c0 + c1 * grid
            got = tw.apply(vals)
            s1, s2 = sigma + 1.0, sigma + 2.0
            # int_0^x (x-s)^sigma (c0 + c1 s) ds in closed form
            ref = c0 * grid ** s1 / s1 + c1 * (grid ** s2 / s1 - grid ** s2 / s2)
            np.testing.assert_allclose(got, ref, rtol=1e-12, atol=1e-14)


def test_product_weights_second_order_on_smooth_integrand():
    # int_0^x (x-s)^(-1/2) s^2 ds = (16/15) x^(5/2)
    errs = []
    for n in (101, 201, 401):
        grid = np.linspace(0.0, 1.0, n)
        tw = product_weights(grid, -0.5)
        got = tw.apply(grid ** 2)
        ref = (16.0 / 15.0) * grid ** 2.5
        errs.append(float(np.max(np.abs(got - ref))))
    order = math.log(errs[0] / errs[2]) / math.log(4.0)
    assert errs[-1] < 5e-6
    assert order > 1.9


def test_product_weights_reject_bad_grids():
    with pytest.raises(ValueError):
        product_weights(np.array([0.1, 0.5, 1.0]), -0.5)
    with pytest.raises(ValueError):
        product_weights(np.array([0.0, 0.5, 0.5, 1.0]), -0.5)
    with pytest.raises(ValueError):
        product_weights(np.linspace(0.0, 1.0, 5), 0.5)
