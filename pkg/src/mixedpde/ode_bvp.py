"""Two-point problem satisfied by the interface trace.

The trace solves a constant-coefficient second-order equation on [0,1]
whose source is the interface flux scaled by a Gamma factor, with the
parabolic side traces as endpoint values.  The Green function is built
from a spectral sine that switches between hyperbolic, linear and
trigonometric branches without a seam: near the branch point it is
evaluated by one shared power series in lambda2*u**2.
"""

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import gauss_legendre

_SERIES_CUT = 0.5
_RECIP_ODD_FACT = np.array([1.0 / math.factorial(2 * j + 1) for j in range(13)])


@dataclass(frozen=True)
class BvpData:
    """Endpoint values for the interface two-point problem."""
    left: float = 0.0
    right: float = 0.0


def spectral_sine(lambda2, u):
    """Odd entire solution of v'' = lambda2 * v with v(0)=0, v'(0)=1.

    sinh-like for lambda2 > 0, sin-like for lambda2 < 0, identity at 0;
    small arguments go through the common series so the three branches
    agree to machine precision where they meet.
    """
    u_arr = np.asarray(u, dtype=float)
    scalar = (u_arr.ndim == 0)
    uv = np.atleast_1d(u_arr).astype(float)
    w = lambda2 * uv * uv
    out = np.empty_like(uv)
    small = np.abs(w) < _SERIES_CUT
    if np.any(small):
        ws = w[small]
        acc = np.zeros_like(ws)
        for rf in _RECIP_ODD_FACT[::-1]:
            acc = acc * ws + rf
        out[small] = uv[small] * acc
    big = ~small
    if np.any(big):
        ub = uv[big]
        if lambda2 > 0.0:
            root = np.sqrt(lambda2)
            out[big] = np.sinh(root * ub) / root
        else:
            root = np.sqrt(-lambda2)
            out[big] = np.sin(root * ub) / root
    return float(out[0]) if scalar else out.reshape(u_arr.shape)


def green_bvp(lambda2, x, t):
    """Green function of d2/dx2 - lambda2 with zero endpoint values.

    Symmetric, negative for lambda2 >= 0; written so that the solution
    of v'' - lambda2 v = f is the plain integral of G times f.
    """
    x_arr, t_arr = np.broadcast_arrays(np.asarray(x, dtype=float),
                                       np.asarray(t, dtype=float))
    lo = np.minimum(x_arr, t_arr)
    hi = np.maximum(x_arr, t_arr)
    return spectral_sine(lambda2, lo) * spectral_sine(lambda2, hi - 1.0) \
        / spectral_sine(lambda2, 1.0)


def solve_interface_bvp(params, source, data, x, n=32):
    """Solve v'' - lambda2 v = source on (0,1), v(0)=left, v(1)=right.

    The affine part carries the endpoint data; its spectral leftover is
    folded into the Green integral.  The integral is split at t = x so
    the kink of G never crosses a quadrature panel.  Vectorized over x.
    """
    lam2 = params.lambda2
    rule = gauss_legendre(n)
    u = rule.nodes
    w = rule.weights
    x_arr = np.asarray(x, dtype=float)
    scalar = (x_arr.ndim == 0)
    xv = np.atleast_1d(x_arr).astype(float)

    def rhs_all(t):
        t = np.asarray(t, dtype=float)
        aff = data.left + t * (data.right - data.left)
        return lam2 * aff + np.asarray(source(t), dtype=float)

    s1 = spectral_sine(lam2, 1.0)
    t_lo = xv[:, None] * u[None, :]
    g_lo = spectral_sine(lam2, t_lo) * spectral_sine(lam2, xv - 1.0)[:, None] / s1
    int_lo = xv * ((g_lo * rhs_all(t_lo.ravel()).reshape(t_lo.shape)) @ w)
    t_hi = xv[:, None] + (1.0 - xv)[:, None] * u[None, :]
    g_hi = spectral_sine(lam2, xv)[:, None] * spectral_sine(lam2, t_hi - 1.0) / s1
    int_hi = (1.0 - xv) * ((g_hi * rhs_all(t_hi.ravel()).reshape(t_hi.shape)) @ w)
    out = data.left + xv * (data.right - data.left) + int_lo + int_hi
    return float(out[0]) if scalar else out.reshape(x_arr.shape)


def trace_from_flux(params, flux, x, data=None, n=32):
    """Interface trace generated by a flux through the two-point problem."""
    if data is None:
        data = BvpData()
    g1d = params.gamma_delta1

    def source(t):
        return g1d * np.asarray(flux(t), dtype=float)

    return solve_interface_bvp(params, source, data, x, n=n)
