"""Fractional-in-time parabolic half of the mixed problem.

The upper-domain solution is assembled from a fundamental solution that
is a one-sided stable-type decay profile integrated against an order-0
even Bessel kernel, reflected over the strip walls (method of images),
and finally integrated against the interface trace.

Accuracy note: the decay profile alternates with terms whose peak grows
like exp(kappa * s**(1/(1-c))) while the value itself shrinks at the
same rate, so a double-precision summation loses all digits beyond a
moderate argument.  The profile is therefore tabulated once per order
as piecewise Chebyshev fits sampled in extended precision; the plain
double series stays available in specfun as an independent cross-check
below the roundoff boundary.
"""

import math

import mpmath
import numpy as np
from numpy.polynomial import chebyshev
from scipy.special import i0, j0

from .gridfn import GridFunction
from .quadrature import gauss_jacobi, gauss_legendre, product_weights
from .specfun import ConvergenceError, gamma_real

_MAX_PANELS = 400
_PANEL_TOL = 1e-17
_IMAGE_TOL = 1e-13


class KernelProfile:
    """Piecewise-Chebyshev tabulation of the time-kernel decay profile.

    Pieces cover unit intervals [i, i+1] and are built lazily; each one
    is sampled by summing the alternating series in mpmath at a working
    precision matched to the internal term growth on that interval.
    """

    def __init__(self, c, degree=24, pad=8):
        if not 0.0 < c <= 0.5:
            raise ValueError("profile order must lie in (0, 1/2]")
        self.c = float(c)
        self.degree = int(degree)
        self.pad = int(pad)
        e = 1.0 / (1.0 - self.c)
        self.kappa = (1.0 - self.c) * self.c ** (self.c * e)
        self.growth_exp = e
        self._coeffs = {}

    def _dps_for(self, smax):
        return 30 + int(self.kappa * smax ** self.growth_exp / math.log(10.0))

    def _series_mp(self, s):
        """Value at s by direct summation at the current mpmath precision.

        The stopping rule bounds every remaining term through the
        envelope |u_k| * Gamma(1 + c k); testing the terms themselves
        would stop too early, since 1/Gamma(-c k) vanishes exactly
        whenever c k is an integer.
        """
        c = mpmath.mpf(self.c)
        z = -mpmath.mpf(s)
        tot = mpmath.mpf(0)
        u = mpmath.mpf(1)
        peak = mpmath.mpf(1)
        cutoff = mpmath.mpf(10) ** (-(mpmath.mp.dps + 5))
        k_peak = (float(s) * self.c ** self.c) ** self.growth_exp + 10.0
        for k in range(1, 20000):
            u *= z / k
            term = u * mpmath.rgamma(-c * k)
            tot += term
            at = abs(term)
            if at > peak:
                peak = at
            if k > k_peak and abs(u) * mpmath.gamma(1 + c * k) < cutoff * peak:
                return tot
        raise ConvergenceError("profile series did not converge at s=%g" % s)

    def envelope(self, s):
        """Monotone upper bound for the profile tail.

        The decay law exp(-kappa s^e) carries an algebraic factor that
        grows like s^(e/2); the constant 2 covers the small-s plateau.
        """
        s = float(s)
        return 2.0 * (1.0 + s) ** (0.5 * self.growth_exp) * math.exp(
            -self.kappa * s ** self.growth_exp)

    def _build(self, i):
        m = self.degree + self.pad + 1
        j = np.arange(m)
        xs = i + 0.5 * (1.0 + np.cos(np.pi * j / (m - 1)))
        with mpmath.workdps(self._dps_for(i + 1)):
            ys = np.array([float(self._series_mp(x)) for x in xs])
        self._coeffs[i] = chebyshev.chebfit(2.0 * (xs - i) - 1.0, ys, self.degree)

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=float)
        scalar = (s_arr.ndim == 0)
        sv = np.atleast_1d(s_arr).astype(float)
        if np.any(sv < 0.0):
            raise ValueError("profile argument must be nonnegative")
        out = np.empty_like(sv)
        idx = np.minimum(np.floor(sv).astype(int), np.int64(1 << 30))
        for i in np.unique(idx):
            i = int(i)
            if i > _MAX_PANELS:
                raise ConvergenceError("profile requested beyond panel cap")
            if i not in self._coeffs:
                self._build(i)
            mask = idx == i
            out[mask] = chebyshev.chebval(2.0 * (sv[mask] - i) - 1.0, self._coeffs[i])
        return float(out[0]) if scalar else out.reshape(s_arr.shape)


_PROFILES = {}


def decay_profile(c):
    """Process-wide cache of kernel profiles keyed by order."""
    key = round(float(c), 15)
    if key not in _PROFILES:
        _PROFILES[key] = KernelProfile(key)
    return _PROFILES[key]


def _order0_kernel(w):
    """Order-0 even Bessel kernel for array argument of either sign."""
    w = np.asarray(w, dtype=float)
    out = np.empty_like(w)
    neg = w < 0.0
    if np.any(neg):
        out[neg] = i0(np.sqrt(-w[neg]))
    pos = ~neg
    if np.any(pos):
        out[pos] = j0(np.sqrt(w[pos]))
    return out


def fundamental_solution(params, x, y, n_panel=16):
    """Pointwise fundamental solution on the strip axis, reference path.

    Integrates profile(s) * kernel(lambda2 * y**(2c) * (s^2 - s0^2))
    over s >= s0 = |x| / y**c in unit panels anchored at integers,
    stopping after three consecutive negligible panels.  Scalar x, y.
    """
    if y <= 0.0:
        raise ValueError("need y > 0")
    c = 0.5 * params.delta
    prof = decay_profile(c)
    gl = gauss_legendre(n_panel)
    s0 = abs(float(x)) / y ** c
    b2 = params.lambda2 * y ** (2.0 * c)
    acc = 0.0
    small_run = 0
    lo = s0
    hi = math.ceil(s0)
    if hi == lo:
        hi = lo + 1.0
    for _ in range(_MAX_PANELS):
        width = hi - lo
        s = lo + width * gl.nodes
        vals = prof(s) * _order0_kernel(b2 * (s * s - s0 * s0))
        contrib = width * float(np.dot(gl.weights, vals))
        acc += contrib
        if abs(contrib) < _PANEL_TOL * max(1.0, abs(acc)):
            small_run += 1
            if small_run >= 3:
                return 0.5 * y ** (c - 1.0) * acc
        else:
            small_run = 0
        lo = hi
        hi = lo + 1.0
    raise ConvergenceError("fundamental solution tail did not cut off")


class _GammaTable:
    """Fundamental solution at one time level, tabulated over s0.

    The value as a function of s0 is smooth, so it is sampled on a step
    1/64 grid by sharing panel quadrature nodes across all s0 entries,
    then read back through cubic interpolation.  Entries beyond the
    panel cutoff are exactly zero.
    """

    H0 = 1.0 / 64.0

    def __init__(self, c, lambda2, ylev, profile, n_panel=16):
        self.c = c
        self.ylev = float(ylev)
        gl = gauss_legendre(n_panel)
        b2 = lambda2 * self.ylev ** (2.0 * c)
        growth = math.sqrt(-b2) if b2 < 0.0 else 0.0
        # panel scan on the analytic profile envelope: worst case s0 = 0,
        # kernel bounded by exp(growth*s)
        stop = None
        run = 0
        for m in range(_MAX_PANELS):
            if growth * (m + 1.0) > 700.0:
                raise ConvergenceError("kernel growth overflows double range")
            bound = profile.envelope(float(m)) * math.exp(growth * (m + 1.0))
            if bound < _PANEL_TOL:
                run += 1
                if run >= 3:
                    stop = m + 1
                    break
            else:
                run = 0
        if stop is None:
            raise ConvergenceError("time-level table tail did not cut off")
        self.s_max = float(stop)
        npts = int(round(self.s_max / self.H0)) + 1
        s0 = np.arange(npts) * self.H0
        vals = np.zeros(npts)
        ceil_s0 = np.ceil(s0 - 1e-12)
        # partial panels [s0, ceil(s0)]
        width = ceil_s0 - s0
        live = width > 1e-14
        if np.any(live):
            sp = s0[live, None] + width[live, None] * gl.nodes[None, :]
            ev = profile(sp.ravel()).reshape(sp.shape)
            kv = _order0_kernel(b2 * (sp * sp - (s0[live] ** 2)[:, None]))
            vals[live] += width[live] * ((ev * kv) @ gl.weights)
        # full unit panels anchored at integers
        for m in range(stop):
            act = ceil_s0 <= m
            if not np.any(act):
                continue
            s = m + gl.nodes
            ev = profile(s)
            kv = _order0_kernel(b2 * (s * s)[None, :] - b2 * (s0[act] ** 2)[:, None])
            vals[act] += (ev[None, :] * kv) @ gl.weights
        pref = 0.5 * self.ylev ** (c - 1.0)
        self._interp = GridFunction(nodes=s0, values=pref * vals)

    def eval(self, s0_query):
        q = np.asarray(s0_query, dtype=float)
        out = np.zeros_like(q, dtype=float)
        inside = q < self.s_max - 2.0 * self.H0
        if np.any(inside):
            out[inside] = self._interp(q[inside])
        return out


class HeatGreen:
    """Green function of the upper domain via wall images.

    Caches one s0-table per time level; green() walks image shells
    outward until two consecutive shells are negligible, raising if the
    cap is reached first.  Wide time levels need more shells than
    narrow ones, so the count adapts while staying deterministic.
    """

    def __init__(self, params, images=40, n_panel=16):
        self.params = params
        self.c = 0.5 * params.delta
        self.images = int(images)
        self.n_panel = n_panel
        self.profile = decay_profile(self.c)
        self._tables = {}

    def table(self, ylev):
        if ylev <= 0.0:
            raise ValueError("need a positive time level")
        key = round(float(ylev), 14)
        if key not in self._tables:
            self._tables[key] = _GammaTable(self.c, self.params.lambda2, key,
                                            self.profile, n_panel=self.n_panel)
        return self._tables[key]

    def gamma(self, xhat, ylev):
        """Fundamental solution at signed axis offset xhat, vectorized."""
        tab = self.table(ylev)
        s0 = np.abs(np.asarray(xhat, dtype=float)) / float(ylev) ** self.c
        return tab.eval(s0)

    def green(self, x, t, ylev):
        """Dirichlet Green function value, vectorized over broadcast x,t."""
        x_arr, t_arr = np.broadcast_arrays(np.asarray(x, dtype=float),
                                           np.asarray(t, dtype=float))
        acc = np.zeros(x_arr.shape)
        run = 0
        for m in range(0, self.images + 1):
            shell = 0.0
            for off in ((0.0,) if m == 0 else (2.0 * m, -2.0 * m)):
                direct = self.gamma(x_arr - t_arr + off, ylev)
                mirror = self.gamma(x_arr + t_arr + off, ylev)
                acc += direct - mirror
                shell = max(shell, float(np.max(np.abs(direct))),
                            float(np.max(np.abs(mirror))))
            if shell < _IMAGE_TOL * max(1.0, float(np.max(np.abs(acc)))):
                run += 1
                if run >= 2:
                    return acc
            else:
                run = 0
        raise ConvergenceError("image sum truncated too early; raise images")


def u_parabolic(params, hg, trace, x, y, side_left=None, side_right=None,
                n_t=64, n_s=32, dt_step=1e-5):
    """Upper-domain solution at level y > 0, vectorized over x.

    Gamma(delta) times the Green-smoothed interface trace, plus wall
    contributions from the side traces applied through the normal
    derivative of the Green function (skipped when the sides are zero).
    The wall normal derivative uses the odd image extension, so a
    one-sided sample divided by the step is a centered difference.
    """
    if y <= 0.0:
        raise ValueError("need y > 0")
    x_arr = np.asarray(x, dtype=float)
    scalar = (x_arr.ndim == 0)
    xv = np.atleast_1d(x_arr).astype(float)
    gl = gauss_legendre(n_t)
    tau_vals = np.atleast_1d(np.asarray(trace(gl.nodes), dtype=float))
    gmat = hg.green(xv[None, :], gl.nodes[:, None], y)
    out = gamma_real(params.delta) * ((gl.weights * tau_vals) @ gmat)
    if side_left is not None or side_right is not None:
        # side data arrive scaled by s**(1-delta); the unscaling power is
        # folded into a Jacobi weight over s = y*v
        gs = gauss_jacobi(n_s, 0.0, params.delta - 1.0)
        yd = y ** params.delta
        for vq, wq in zip(gs.nodes, gs.weights):
            lev = y * (1.0 - vq)
            if lev <= dt_step:
                continue
            # odd image extension: one-sided sample over the step is a
            # centered derivative in the wall-normal slot
            if side_left is not None:
                gt0 = hg.green(xv, dt_step, lev) / dt_step
                out += yd * wq * float(side_left(y * vq)) * gt0
            if side_right is not None:
                gt1 = -hg.green(xv, 1.0 - dt_step, lev) / dt_step
                out -= yd * wq * float(side_right(y * vq)) * gt1
    return float(out[0]) if scalar else out.reshape(x_arr.shape)


def pde_residual_parabolic(params, u_fn, trace, x, y_grid, hx=2e-3):
    """Residual of the upper-domain equation along a vertical line.

    The solution is split as y**(delta-1) * trace(x) plus a remainder;
    the fractional derivative kills the first part exactly, and the
    remainder's derivative is formed by product integration of its
    fractional integral followed by a centered difference in y.  The
    remainder value at y=0 is recovered by fitting 1, y**delta,
    y**(2 delta) through the first interior samples.  Returns
    (y_interior, residuals) for the interior nodes.
    """
    d = params.delta
    y_grid = np.asarray(y_grid, dtype=float)
    if y_grid[0] != 0.0 or len(y_grid) < 8:
        raise ValueError("y_grid must start at 0 with enough nodes")
    h = y_grid[1] - y_grid[0]
    if not np.allclose(np.diff(y_grid), h):
        raise ValueError("y_grid must be uniform")
    tau_x = float(trace(x))
    ypos = y_grid[1:]
    u_line = np.array([float(u_fn(x, yy)) for yy in ypos])
    r = u_line - ypos ** (d - 1.0) * tau_x
    basis = np.vstack([np.ones(4), y_grid[1:5] ** d, y_grid[1:5] ** (2.0 * d)]).T
    coef, *_ = np.linalg.lstsq(basis, r[:4], rcond=None)
    r_full = np.concatenate([[coef[0]], r])
    frac = product_weights(y_grid, -d).apply(r_full) / gamma_real(1.0 - d)
    dfrac = (frac[2:] - frac[:-2]) / (2.0 * h)
    res = []
    for j in range(1, len(y_grid) - 1):
        yy = y_grid[j]
        uxx = (float(u_fn(x + hx, yy)) - 2.0 * u_line[j - 1]
               + float(u_fn(x - hx, yy))) / hx ** 2
        res.append(uxx - dfrac[j - 1] - params.lambda2 * u_line[j - 1])
    return y_grid[1:-1], np.array(res)
