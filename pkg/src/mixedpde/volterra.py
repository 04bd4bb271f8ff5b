"""Weakly singular Volterra equation for the interface flux.

Eliminating the trace between the two interface relations leaves a
second-kind Volterra equation for the flux whose kernel is a power
singularity times a smooth even-Bessel factor.  The solver uses
product-integration weights that are exact on piecewise-linear
functions; the smooth factor is sampled at the nodes.
"""

import numpy as np

from .gridfn import GridFunction
from .hyperbolic import trace_via_flux_forcing
from .ode_bvp import trace_from_flux
from .quadrature import gauss_jacobi, product_weights
from .specfun import even_bessel, gamma_real


def solve_weakly_singular(grid, rhs_values, sigma, coeff, smooth_fn=None):
    """Solve v(x) - coeff * int_0^x (x-s)^sigma * k(x,s) v(s) ds = rhs.

    sigma in (-1, 0); k is the optional smooth kernel factor (defaults
    to 1), called vectorized on node pair arrays.  Forward substitution
    on the product-integration discretization; the diagonal weight
    scales like h**(1+sigma), so the scheme stays far from the
    resolvent singularity on any reasonable grid.
    """
    grid = np.asarray(grid, dtype=float)
    rhs = np.asarray(rhs_values, dtype=float)
    if grid.shape != rhs.shape:
        raise ValueError("grid and rhs must have matching shapes")
    tw = product_weights(grid, sigma)
    kmat = tw.W.copy()
    if smooth_fn is not None:
        xi = np.repeat(grid[:, None], len(grid), axis=1)
        sj = np.repeat(grid[None, :], len(grid), axis=0)
        kmat *= np.asarray(smooth_fn(xi, sj), dtype=float)
    kmat *= coeff
    n = len(grid)
    v = np.empty(n)
    v[0] = rhs[0]
    for i in range(1, n):
        acc = rhs[i] + np.dot(kmat[i, :i], v[:i])
        denom = 1.0 - kmat[i, i]
        if abs(denom) < 1e-10:
            raise ZeroDivisionError("degenerate diagonal in Volterra solve")
        v[i] = acc / denom
    return v


def volterra_rhs(params, forcing, x, n=48):
    """Right-hand side of the flux equation from the forcing object.

    The integrand's endpoint powers (including the forcing's own
    vanishing order p at the origin) are folded into a Jacobi weight;
    only the scaled forcing profile and the monotone kernel of order
    -1-beta are sampled.  Vectorized over x.
    """
    beta = params.beta
    lam2 = params.lambda2
    p = forcing.p
    cq = 4.0 * beta * (2.0 * beta + 1.0) * params.cos_pi_beta \
        / (params.gamma_delta1 * gamma_real(1.0 - beta))
    rule = gauss_jacobi(n, -2.0 * beta - 2.0, 2.0 + 2.0 * beta + float(p))
    x_arr = np.asarray(x, dtype=float)
    scalar = (x_arr.ndim == 0)
    xv = np.atleast_1d(x_arr).astype(float)
    u = rule.nodes
    inner = xv[:, None] * u[None, :]
    phi_s = forcing.scaled(inner.ravel()).reshape(inner.shape)
    warg = -lam2 * (xv ** 2)[:, None] * ((1.0 - u) ** 2)[None, :]
    kern = even_bessel(-1.0 - beta, warg)
    out = cq * xv ** (1.0 + p) * ((phi_s * kern) @ rule.weights)
    return float(out[0]) if scalar else out.reshape(x_arr.shape)


def solve_volterra(params, forcing, grid, n_rhs=48):
    """Solve the flux equation on the given grid; returns a GridFunction."""
    beta = params.beta
    lam2 = params.lambda2
    grid = np.asarray(grid, dtype=float)
    rhs = np.atleast_1d(volterra_rhs(params, forcing, grid, n=n_rhs))
    kappa = 2.0 * beta * (2.0 * beta + 1.0) * params.coef_density / params.gamma_delta1

    def smooth(xm, sm):
        return even_bessel(-1.0 - beta, -lam2 * (xm - sm) ** 2)

    vals = solve_weakly_singular(grid, rhs, -2.0 * beta - 2.0, kappa, smooth)
    return GridFunction(nodes=grid, values=vals)


def flux_identity_residual(params, flux, forcing, x, data=None, n=32):
    """Residual of the closing identity between the two trace routes.

    Route one solves the interface two-point problem driven by the
    flux; route two pushes flux and forcing through the density
    representation of the lower domain.  Both must produce the same
    trace; the returned array is their difference at x.
    """
    t_bvp = trace_from_flux(params, flux, x, data=data, n=n)
    t_dens = trace_via_flux_forcing(params, flux, forcing, x, n=n)
    return np.asarray(t_bvp) - np.asarray(t_dens)
