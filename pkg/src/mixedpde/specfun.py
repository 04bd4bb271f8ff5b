"""Series-based special functions used throughout the solver.

Everything here works in real arithmetic.  The Bessel-type kernels are
evaluated in squared-argument form: even_bessel(g, w) with w = z**2 gives
the oscillatory kernel and w = -z**2 the modified (growing) one, so a
signed squared spectral parameter never forces complex numbers.
"""

import math
from dataclasses import dataclass

import numpy as np

_EPS = np.finfo(float).eps
# Absolute noise floor of an alternating series is eps * (largest term).
# Sums below _CLAMP * that floor are indistinguishable from zero in doubles.
_CLAMP = 30.0


class ConvergenceError(RuntimeError):
    """A series or panel scheme failed to meet its tolerance."""


@dataclass(frozen=True)
class SeriesTolerance:
    rel_tol: float = 1e-14
    max_terms: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0.0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


_DEFAULT_TOL = SeriesTolerance()


def _sinpi(x):
    """sin(pi*x) with exact zeros at integer x."""
    n = round(x)
    r = x - n
    s = math.sin(math.pi * r)
    return -s if (n % 2) else s


def gamma_real(x):
    """Gamma function for real non-pole arguments."""
    if x <= 0.0 and x == math.floor(x):
        raise ValueError(f"gamma pole at x={x}")
    return math.gamma(x)


def recip_gamma(x):
    """1/Gamma(x), total on the reals: exactly 0.0 at 0, -1, -2, ..."""
    if x > 0.5:
        if x > 171.0:
            return 0.0
        return 1.0 / math.gamma(x)
    # reflection: 1/Gamma(x) = Gamma(1-x) * sin(pi*x) / pi
    s = _sinpi(x)
    if s == 0.0:
        return 0.0
    y = 1.0 - x
    if y > 171.0:
        # Gamma(1-x) overflows; go through logs, sign carried by s
        return math.copysign(math.inf, s) if math.lgamma(y) > 709.0 else s * math.exp(math.lgamma(y)) / math.pi
    return s * math.gamma(y) / math.pi


def even_bessel(g, w, tol=_DEFAULT_TOL):
    """Gamma(g+1) * sum_m (-w/4)^m / (m! * Gamma(m+g+1)).

    For w >= 0 this equals the normalized oscillatory Bessel kernel of
    order g at argument sqrt(w); for w < 0 the modified kernel at
    sqrt(-w).  Scalar or ndarray w.  g must avoid -1, -2, ...
    """
    if g <= -1.0 and float(g) == math.floor(g):
        raise ValueError(f"order g={g} hits a gamma pole")
    w_arr = np.asarray(w, dtype=float)
    scalar = (w_arr.ndim == 0)
    q = -np.atleast_1d(w_arr) / 4.0
    term = np.ones_like(q)
    total = np.ones_like(q)
    peak = np.ones_like(q)
    for m in range(1, tol.max_terms + 1):
        term = term * q / (m * (m + g))
        total += term
        np.maximum(peak, np.abs(term), out=peak)
        if np.all(np.abs(term) <= tol.rel_tol * np.maximum(np.abs(total), 1.0)):
            break
    else:
        raise ConvergenceError(
            f"even_bessel series not converged in {tol.max_terms} terms "
            f"(max |w| = {np.max(np.abs(w_arr)):.3g})")
    # cancellation floor: a sum buried under roundoff of the peak term is zero
    total = np.where(np.abs(total) < _CLAMP * _EPS * peak, 0.0, total)
    return float(total[0]) if scalar else total.reshape(w_arr.shape)


def even_bessel_dw(g, w, tol=_DEFAULT_TOL):
    """d/dw of even_bessel(g, w), via the exact order-raising identity."""
    return -even_bessel(g + 1.0, w, tol) / (4.0 * (g + 1.0))


def wright_e(mu, d2, a, b, z, tol=_DEFAULT_TOL):
    """sum_k z^k / (Gamma(mu + a*k) * Gamma(d2 - b*k)) for a > b.

    Pole factors vanish through recip_gamma.  The z^k/Gamma(mu+a*k)
    part is carried by an exact multiplicative recurrence when a is a
    small positive integer (the only regime the solver uses), which
    keeps each term accurate to a few ulp even when terms grow huge
    before the sum cancels down.  The returned value is clamped to 0.0
    when it falls below the roundoff floor of the largest term, since
    digits below that floor are noise.
    """
    if not a > b:
        raise ValueError("need a > b for convergence")
    z_arr = np.asarray(z, dtype=float)
    scalar = (z_arr.ndim == 0)
    zv = np.atleast_1d(z_arr).astype(float)

    int_a = float(a).is_integer() and 1 <= int(a) <= 2
    u = np.full_like(zv, recip_gamma(mu))  # u_k = z^k / Gamma(mu + a k)
    v0 = recip_gamma(d2)
    total = u * v0
    peak = np.abs(total).copy()
    converged = False
    # a small term proves nothing when recip_gamma(d2 - b*k) hit an exact
    # pole zero; demand enough consecutive small terms to cover the pole
    # spacing, and only after the term magnitudes have peaked
    need = int(math.ceil(1.0 / b)) + 1 if b > 0.0 else 1
    k_min = int(np.max(np.abs(zv)) ** (1.0 / a)) + 2
    small_run = 0
    for k in range(1, tol.max_terms + 1):
        if int_a:
            denom = 1.0
            for j in range(int(a)):
                denom *= (mu + a * (k - 1) + j)
            if denom == 0.0:
                # recurrence crosses a pole of Gamma(mu+a*k); restart directly
                rg = recip_gamma(mu + a * k)
                u = np.zeros_like(zv) if rg == 0.0 else zv ** k * rg
            else:
                u = u * zv / denom
        else:
            # generic order: per-term log-gamma ratio (reduced accuracy)
            ratio = math.exp(math.lgamma(mu + a * (k - 1)) - math.lgamma(mu + a * k))
            u = u * zv * ratio
        term = u * recip_gamma(d2 - b * k)
        total = total + term
        np.maximum(peak, np.abs(term), out=peak)
        if np.max(peak) > 1e280:
            # terms this large mean the true value has underflowed to 0
            big = peak > 1e280
            total = np.where(big, 0.0, total)
            peak = np.where(big, 0.0, peak)
            u = np.where(big, 0.0, u)
        if np.all(np.abs(term) <= tol.rel_tol * np.maximum(np.abs(total), _EPS * peak)):
            small_run += 1
            if small_run >= need and k >= k_min:
                converged = True
                break
        else:
            small_run = 0
    if not converged:
        raise ConvergenceError(f"wright_e series not converged in {tol.max_terms} terms")
    total = np.where(np.abs(total) < _CLAMP * _EPS * peak, 0.0, total)
    return float(total[0]) if scalar else total.reshape(z_arr.shape)


def wright_decay(c, s, tol=None):
    """The kernel profile sum_k (-s)^k / (k! * Gamma(-c*k)) for s >= 0.

    Equals wright_e(1, 0, 1, c, -s); vectorized with an enlarged term
    budget because the alternating series needs O(s^{1/(1-c)}) terms
    before its tail dies.  Values below the roundoff floor come back as
    exactly 0.0, which is what lets panel integration terminate.
    """
    if tol is None:
        tol = SeriesTolerance(rel_tol=1e-15, max_terms=2000)
    return wright_e(1.0, 0.0, 1.0, c, -np.asarray(s, dtype=float), tol)
