"""Series kernels: frozen mpmath references and exact reductions."""

import math

import numpy as np
import pytest

from mixedpde.specfun import (ConvergenceError, SeriesTolerance, even_bessel,
                              even_bessel_dw, gamma_real, recip_gamma,
                              wright_decay, wright_e)

# mpmath at 50 dps, printed to 22 digits
EVEN_BESSEL_REF = {
    (0.0, 2.0): 0.5591341444189799174883,
    (-0.75, 1.0): 0.09636669003800174850641,
    (1.0, 4.0): 0.5767248077568733872024,
    (0.0, -2.0): 1.566082929756350537292,
    (-0.25, -1.0): 1.357876510377569241407,
}

# sum_{k>=1} (-s)^k / (k! Gamma(-c k)), mpmath series with envelope stopping
WRIGHT_DECAY_REF = {
    (0.25, 0.5): 0.07099610235509619703299,
    (0.25, 2.0): 0.08062554172729292795252,
    (0.25, 5.0): 0.00911162134063333290341,
    (0.25, 10.0): 3.177053279141436163315e-05,
    (0.4, 1.0): 0.1640934376175307371721,
    (0.4, 7.5): 0.0001103577408411746093917,
}

J01_SQUARED = 5.783185962946784521176


def test_gamma_real_matches_reference_values():
    np.testing.assert_allclose(gamma_real(0.5), 1.772453850905516027298, rtol=1e-15)
    np.testing.assert_allclose(gamma_real(-0.5), -3.544907701811032054596, rtol=1e-15)
    np.testing.assert_allclose(gamma_real(0.25), 3.625609908221908311931, rtol=1e-15)


def test_gamma_real_rejects_poles():
    for x in (0.0, -1.0, -7.0):
        with pytest.raises(ValueError):
            gamma_real(x)


def test_recip_gamma_is_total_with_exact_zeros():
    for x in (0.0, -1.0, -2.0, -15.0):
        assert recip_gamma(x) == 0.0
    np.testing.assert_allclose(recip_gamma(-1.5), 0.4231421876608172152111,
                               rtol=1e-14)
    # reflection branch against the direct one on positive arguments
    for x in (0.3, 0.5, 2.75, 10.0):
        np.testing.assert_allclose(recip_gamma(x), 1.0 / math.gamma(x),
                                   rtol=1e-14)


def test_even_bessel_is_one_at_zero_argument():
    # exact: the series' first term is 1 and every later term carries w
    for g in (-0.75, -0.25, 0.0, 0.5, 1.0, 3.0):
        assert even_bessel(g, 0.0) == 1.0


def test_even_bessel_frozen_reference_values():
    for (g, w), ref in EVEN_BESSEL_REF.items():
        np.testing.assert_allclose(even_bessel(g, w), ref, rtol=1e-13)


def test_even_bessel_half_order_reduces_to_sinc():
    # order 1/2 kernel collapses to sin(sqrt(w))/sqrt(w)
    w = np.linspace(0.05, 40.0, 57)
    got = even_bessel(0.5, w)
    ref = np.sin(np.sqrt(w)) / np.sqrt(w)
    np.testing.assert_allclose(got, ref, atol=1e-10)


def test_even_bessel_vanishes_at_first_bessel_zero():
    assert abs(even_bessel(0.0, J01_SQUARED)) < 1e-14


def test_even_bessel_derivative_recurrence():
    # analytic dw route against a centered difference of the series
    h = 1e-5
    for g in (-0.75, 0.0, 1.5):
        for w in (-3.0, -0.5, 0.7, 4.0, 12.0):
            fd = (even_bessel(g, w + h) - even_bessel(g, w - h)) / (2.0 * h)
            np.testing.assert_allclose(even_bessel_dw(g, w), fd, atol=1e-6)


def test_even_bessel_rejects_pole_orders():
    with pytest.raises(ValueError):
        even_bessel(-1.0, 1.0)
    with pytest.raises(ValueError):
        even_bessel(-3.0, 1.0)


def test_even_bessel_raises_when_terms_run_out():
    with pytest.raises(ConvergenceError):
        even_bessel(0.0, 50.0, tol=SeriesTolerance(rel_tol=1e-14, max_terms=4))


def test_wright_e_b_zero_reduces_to_exponential():
    z = np.linspace(-4.0, 4.0, 33)
    got = wright_e(1.0, 1.0, 1.0, 0.0, z)
    np.testing.assert_allclose(got, np.exp(z), rtol=1e-10)


def test_wright_decay_frozen_reference_values():
    for (c, s), ref in WRIGHT_DECAY_REF.items():
        tol = 1e-6 if s >= 7.0 else 1e-10
        np.testing.assert_allclose(wright_decay(c, s), ref, rtol=tol)


def test_wright_decay_clamps_below_the_cancellation_floor():
    # true value ~1.3e-22 sits far below the double roundoff of the peak
    assert wright_decay(0.25, 33.5) == 0.0


def test_wright_decay_half_order_closed_form():
    s = np.linspace(0.1, 5.0, 41)
    ref = (s / (2.0 * math.sqrt(math.pi))) * np.exp(-s * s / 4.0)
    np.testing.assert_allclose(wright_decay(0.5, s), ref, atol=1e-12)
    # deep in the tail the alternating sum cancels down from a peak near
    # exp(s^2/4); accuracy degrades to eps times that peak
    ref8 = (8.0 / (2.0 * math.sqrt(math.pi))) * math.exp(-16.0)
    assert abs(wright_decay(0.5, 8.0) - ref8) < 50.0 * np.exp(16.0) * 2.3e-16


def test_wright_e_requires_convergent_exponents():
    with pytest.raises(ValueError):
        wright_e(1.0, 0.0, 0.5, 0.5, -1.0)
