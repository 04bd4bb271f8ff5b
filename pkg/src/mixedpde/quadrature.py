"""Quadrature rules on [0,1] and product-integration weights.

Gauss rules come from scipy's orthogonal-polynomial machinery, mapped to
the unit interval.  Weakly singular convolution integrals are handled by
TriangularWeights: exact local moments of (x_i - s)^sigma against the
piecewise-linear interpolant of the integrand.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import roots_jacobi, roots_legendre


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights integrating g against (1-u)^a * u^b over [0,1]."""
    nodes: np.ndarray
    weights: np.ndarray
    weight_exponents: tuple

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes/weights length mismatch")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        a, b = self.weight_exponents
        mass = beta_fn(a + 1.0, b + 1.0)
        if abs(float(np.sum(self.weights)) - mass) > 1e-12 * max(1.0, mass):
            raise ValueError("rule fails the total-mass check")

    def integrate(self, g):
        """Integral of g(u) * (1-u)^a * u^b over [0,1]; g smooth."""
        return float(np.dot(self.weights, g(self.nodes)))


@lru_cache(maxsize=256)
def gauss_legendre(n):
    """n-point Gauss rule on [0,1], exact through degree 2n-1."""
    if not 1 <= n <= 256:
        raise ValueError("n out of range")
    x, w = roots_legendre(n)
    return QuadratureRule(nodes=(x + 1.0) / 2.0, weights=w / 2.0,
                          weight_exponents=(0.0, 0.0))


@lru_cache(maxsize=256)
def gauss_jacobi(n, a, b):
    """n-point rule against the weight (1-u)^a * u^b on [0,1]."""
    if not (a > -1.0 and b > -1.0):
        raise ValueError("weight exponents must exceed -1")
    if not 1 <= n <= 256:
        raise ValueError("n out of range")
    if a == 0.0 and b == 0.0:
        return gauss_legendre(n)
    x, w = roots_jacobi(n, a, b)
    # map x = 2u - 1; the weight picks up 2^(-a-b-1) from the stretch
    return QuadratureRule(nodes=(x + 1.0) / 2.0,
                          weights=w * 2.0 ** (-a - b - 1.0),
                          weight_exponents=(float(a), float(b)))


@dataclass(frozen=True)
class TriangularWeights:
    """Lower-triangular weights for int_0^{x_i} (x_i-s)^sigma g(s) ds.

    Row i applied to samples g(x_j) reproduces the integral exactly for
    g piecewise linear on the grid.
    """
    grid: np.ndarray
    sigma: float
    W: np.ndarray

    def apply(self, values):
        return self.W @ np.asarray(values, dtype=float)


def product_weights(grid, sigma):
    """Exact piecewise-linear product-integration weights.

    On each cell [x_j, x_{j+1}] the integrand factor g is replaced by its
    linear interpolant; the moments m0 = int v^sigma dv and
    m1 = int v^sigma v dv (v = x_i - s) are closed-form, so the weights
    are exact for linear g and O(h^2)-accurate otherwise.
    """
    if not -1.0 < sigma < 0.0:
        raise ValueError("sigma must lie in (-1, 0)")
    x = np.asarray(grid, dtype=float)
    if x[0] != 0.0:
        raise ValueError("grid must start at 0")
    if np.any(np.diff(x) <= 0):
        raise ValueError("grid must be strictly increasing")
    n = len(x)
    s1 = sigma + 1.0
    s2 = sigma + 2.0
    W = np.zeros((n, n))
    for i in range(1, n):
        xi = x[i]
        # v = xi - s decreasing in s; cell [x_j, x_{j+1}] maps to [vr, vl]
        vl = xi - x[:i]        # at s = x_j
        vr = xi - x[1:i + 1]   # at s = x_{j+1}
        p0 = (vl ** s1 - vr ** s1) / s1
        p1 = (vl ** s2 - vr ** s2) / s2
        h = x[1:i + 1] - x[:i]
        # g(s) = g_j (x_{j+1}-s)/h + g_{j+1} (s-x_j)/h on the cell;
        # with v = xi - s: x_{j+1}-s = (x_{j+1}-xi) + v, s-x_j = (xi-x_j) - v
        left = ((x[1:i + 1] - xi) * p0 + p1) / h
        right = ((xi - x[:i]) * p0 - p1) / h
        W[i, :i] += left
        W[i, 1:i + 1] += right
    return TriangularWeights(grid=x, sigma=float(sigma), W=W)
