"""End-to-end solver for the mixed parabolic-hyperbolic problem.

Pipeline: boundary data -> interface forcing -> weakly singular
Volterra solve for the flux -> two-point problem for the trace ->
density pair -> field evaluation on both sides of the interface ->
diagnostics.  The estimator wraps this pipeline behind the familiar
fit/predict surface so grids and tolerances are plain constructor
parameters.
"""

import math
import os
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .boundary import BoundaryData, validate_inputs
from .gridfn import GridFunction, uniform_grid
from .hyperbolic import (CharacteristicPoint, aux_density, char_forcing,
                         density_from_flux, derive_parameters,
                         pde_residual_hyperbolic, trace_via_flux_forcing,
                         u_from_densities)
from .ode_bvp import BvpData, trace_from_flux
from .parabolic import HeatGreen, pde_residual_parabolic, u_parabolic
from .volterra import flux_identity_residual, solve_volterra, volterra_rhs


@dataclass(frozen=True)
class DiagnosticEntry:
    name: str
    value: float
    tolerance: float
    passed: bool


class DiagnosticsReport:
    """Ordered set of named sup-norm residuals with pass/fail flags."""

    def __init__(self):
        self.entries = []

    def add(self, name, value, tolerance):
        value = float(value)
        self.entries.append(DiagnosticEntry(name, value, float(tolerance),
                                            value <= tolerance))

    def __getitem__(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def all_passed(self):
        return all(e.passed for e in self.entries)

    def to_text(self):
        lines = []
        for e in self.entries:
            lines.append("%s %.6e %.6e %s"
                         % (e.name, e.value, e.tolerance,
                            "PASS" if e.passed else "FAIL"))
        return "\n".join(lines) + "\n"


@dataclass
class SolutionField:
    """Sampled solution on both half-domains plus the interface records."""
    par_x: np.ndarray
    par_y: np.ndarray
    par_u: np.ndarray
    hyp_xi: np.ndarray
    hyp_eta: np.ndarray
    hyp_x: np.ndarray
    hyp_y: np.ndarray
    hyp_u: np.ndarray
    trace: GridFunction
    flux: GridFunction
    density: GridFunction
    aux: GridFunction
    forcing: GridFunction
    rhs: GridFunction


def export_field(field, out_dir):
    """Write field.csv with fixed header and deterministic row order.

    Hyperbolic rows come first (alphabetical domain order), each block
    in lexicographic grid order; cells that do not apply stay empty.
    All numbers use repr-faithful %.17g so identical solves produce
    byte-identical files.
    """
    path = os.path.join(out_dir, "field.csv")
    fmt = "%.17g"
    with open(path, "w", newline="") as fh:
        fh.write("domain,x,y,xi,eta,u\n")
        for i in range(len(field.hyp_xi)):
            fh.write("hyperbolic,%s,%s,%s,%s,%s\n" % (
                fmt % field.hyp_x[i], fmt % field.hyp_y[i],
                fmt % field.hyp_xi[i], fmt % field.hyp_eta[i],
                fmt % field.hyp_u[i]))
        for i, xv in enumerate(field.par_x):
            for j, yv in enumerate(field.par_y):
                fh.write("parabolic,%s,%s,,,%s\n" % (
                    fmt % xv, fmt % yv, fmt % field.par_u[j, i]))
    return path


def export_diagnostics(report, out_dir):
    path = os.path.join(out_dir, "diagnostics.txt")
    with open(path, "w", newline="") as fh:
        fh.write(report.to_text())
    return path


def _heat_gate_residual():
    """Sup difference between the image-built kernel and the closed-form
    wall-reflected Gauss kernel at unit fractional order."""
    params = derive_parameters(-0.25, 1.0, 0.0, _validate=False)
    hg = HeatGreen(params)
    xs = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    ts = np.array([0.3, 0.6])
    worst = 0.0
    for ylev in (0.1, 0.25, 0.5, 0.75, 1.0):
        got = hg.green(xs[None, :], ts[:, None], ylev)

        def gauss(z):
            return np.exp(-z * z / (4.0 * ylev)) / (2.0 * math.sqrt(math.pi * ylev))

        ref = np.zeros_like(got)
        for m in range(-8, 9):
            ref += gauss(xs[None, :] - ts[:, None] + 2.0 * m)
            ref -= gauss(xs[None, :] + ts[:, None] + 2.0 * m)
        worst = max(worst, float(np.max(np.abs(got - ref))))
    return worst


class MixedProblemSolver(BaseEstimator):
    """Constructive solver for the mixed-type interface problem.

    Parameters follow the estimator convention: everything is set in
    the constructor, fit(data) runs the pipeline on a BoundaryData
    instance, and predict evaluates the field at (x, y) points (rows of
    a two-column array).  Points with y > 0 use the upper-domain
    representation, y < 0 the characteristic one, y = 0 the interface
    trace itself (the upper solution carries a y**(delta-1) growth, so
    its limit is a scaled trace rather than a value).
    """

    def __init__(self, alpha=-0.25, delta=0.5, lambda2=0.0,
                 line_n=401, par_nx=101, par_ny=101, hyp_n=101,
                 quad_n=32, images=40, y_min=0.01,
                 tol_char_bc=1e-3, tol_gluing=1e-3,
                 tol_trace_identity=1e-3, tol_pde=1e-2):
        self.alpha = alpha
        self.delta = delta
        self.lambda2 = lambda2
        self.line_n = line_n
        self.par_nx = par_nx
        self.par_ny = par_ny
        self.hyp_n = hyp_n
        self.quad_n = quad_n
        self.images = images
        self.y_min = y_min
        self.tol_char_bc = tol_char_bc
        self.tol_gluing = tol_gluing
        self.tol_trace_identity = tol_trace_identity
        self.tol_pde = tol_pde

    def _stage(self, label, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except Exception as exc:
            raise RuntimeError("stage %s failed: %s" % (label, exc)) from exc

    def fit(self, X, y=None):
        data = X
        if not isinstance(data, BoundaryData):
            raise TypeError("fit expects a BoundaryData instance")
        params = derive_parameters(self.alpha, self.delta, self.lambda2)
        ok, problems = validate_inputs(params, data)
        if not ok:
            raise ValueError("inadmissible boundary data: " + "; ".join(problems))
        self.params_ = params
        grid = uniform_grid(self.line_n)
        self.forcing_ = self._stage("forcing", char_forcing, params, data,
                                    n=self.quad_n)
        self.flux_ = self._stage("volterra", solve_volterra, params,
                                 self.forcing_, grid, n_rhs=48)
        self.rhs_ = GridFunction(grid, np.atleast_1d(
            volterra_rhs(params, self.forcing_, grid, n=48)))
        self._bvp = BvpData(left=float(data.trace1(0.0)),
                            right=float(data.trace2(0.0)))
        trace_vals = self._stage("trace", trace_from_flux, params, self.flux_,
                                 grid, data=self._bvp, n=self.quad_n)
        self.trace_ = GridFunction(grid, np.atleast_1d(trace_vals))
        forcing_vals = np.atleast_1d(self.forcing_(grid))
        self.density_ = GridFunction(grid, density_from_flux(
            params, self.flux_.values, forcing_vals))
        self.aux_density_ = GridFunction(grid, aux_density(
            params, self.density_.values, self.flux_.values))
        self._forcing_grid = GridFunction(grid, forcing_vals)
        self.hg_ = HeatGreen(params, images=self.images)
        self._data = data
        self.field_ = self._stage("field", self._build_field, data)
        self.diagnostics_ = self._stage("diagnostics", self._run_diagnostics, data)
        return self

    def _check_fitted(self):
        if not hasattr(self, "field_"):
            raise NotFittedError("call fit before using this solver")

    # field assembly -------------------------------------------------

    def _upper_row(self, x_arr, ylev, data=None):
        data = data if data is not None else self._data
        side_l = data.trace1 if np.any(np.asarray(data.trace1_coeffs)) else None
        side_r = data.trace2 if np.any(np.asarray(data.trace2_coeffs)) else None
        return u_parabolic(self.params_, self.hg_, self.trace_, x_arr, ylev,
                           side_left=side_l, side_right=side_r)

    def _lower_eval(self, xi, eta):
        return u_from_densities(self.params_, self.density_, self.aux_density_,
                                xi, eta, n=self.quad_n)

    def scaled_trace_limit(self, xs, n_levels=12, w_lo=0.015, w_hi=0.18,
                           data=None):
        """Limit of y**(1-delta) * u as y -> 0+ along the upper region.

        The scaled solution is analytic in w = y**delta near the interface,
        so sampling a few levels and extrapolating a polynomial in w to w=0
        recovers the limit far more accurately than plain level refinement.
        """
        self._check_fitted()
        params = self.params_
        xs = np.asarray(xs, dtype=float)
        ws = np.linspace(w_lo, w_hi, n_levels)
        ys = ws ** (1.0 / params.delta)
        rows = np.vstack([
            yv ** (1.0 - params.delta) * self._upper_row(xs, float(yv), data)
            for yv in ys])
        coef = np.polynomial.polynomial.polyfit(ws, rows, deg=n_levels - 1)
        return coef[0]

    def _build_field(self, data):
        par_x = np.linspace(0.0, 1.0, self.par_nx)
        par_y = np.linspace(self.y_min, 1.0, self.par_ny)
        par_u = np.empty((self.par_ny, self.par_nx))
        for j, ylev in enumerate(par_y):
            par_u[j, :] = self._upper_row(par_x, float(ylev), data)
        line = uniform_grid(self.hyp_n)
        xi_list = []
        eta_list = []
        for i, xiv in enumerate(line):
            for etav in line[i:]:
                xi_list.append(xiv)
                eta_list.append(etav)
        hyp_xi = np.array(xi_list)
        hyp_eta = np.array(eta_list)
        hyp_u = self._lower_eval(hyp_xi, hyp_eta)
        hyp_x = 0.5 * (hyp_xi + hyp_eta)
        hyp_y = -((hyp_eta - hyp_xi) / 4.0) ** 2
        return SolutionField(par_x=par_x, par_y=par_y, par_u=par_u,
                             hyp_xi=hyp_xi, hyp_eta=hyp_eta,
                             hyp_x=hyp_x, hyp_y=hyp_y, hyp_u=hyp_u,
                             trace=self.trace_, flux=self.flux_,
                             density=self.density_, aux=self.aux_density_,
                             forcing=self._forcing_grid, rhs=self.rhs_)

    # prediction -------------------------------------------------------

    def predict(self, X):
        self._check_fitted()
        pts = np.asarray(X, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("expected an (n, 2) array of x, y points")
        out = np.empty(len(pts))
        for i, (xv, yv) in enumerate(pts):
            if yv > 0.0:
                out[i] = float(self._upper_row(np.array([xv]), float(yv))[0])
            elif yv == 0.0:
                out[i] = float(self.trace_(xv))
            else:
                cp = CharacteristicPoint.from_xy(xv, yv)
                out[i] = float(self._lower_eval(cp.xi, cp.eta))
        return out

    # diagnostics ------------------------------------------------------

    def _run_diagnostics(self, data):
        params = self.params_
        rep = DiagnosticsReport()
        scale = max(float(np.max(np.abs(self.field_.hyp_u))), 1e-30)

        # prescribed data on the left characteristic
        etas = np.linspace(0.05, 1.0, 20)
        u_char = self._lower_eval(np.zeros_like(etas), etas)
        ref = data.psi(etas / 2.0)
        rep.add("char_boundary", np.max(np.abs(u_char - ref)), self.tol_char_bc)

        # conjugation of the two field limits at the interface: the lower
        # representation is continuous up to y=0, the upper limit is
        # extrapolated in w = y**delta where the scaled solution is analytic
        xs = np.linspace(0.1, 0.9, 9)
        upper0 = self.scaled_trace_limit(xs, data=data)
        lower0 = self._lower_eval(xs, xs)
        rep.add("gluing_trace", np.max(np.abs(lower0 - upper0)),
                self.tol_gluing)

        # trace reconstructed through the density representation
        xsid = np.linspace(0.0, 1.0, 21)
        t_dens = trace_via_flux_forcing(params, self.flux_, self.forcing_,
                                        xsid, n=self.quad_n)
        rep.add("trace_identity", np.max(np.abs(t_dens - self.trace_(xsid))),
                self.tol_trace_identity)

        # two-point problem route against the density route
        res19 = flux_identity_residual(params, self.flux_, self.forcing_,
                                       xsid, data=self._bvp, n=self.quad_n)
        rep.add("flux_identity", np.max(np.abs(res19)), self.tol_trace_identity)

        # interior equation residuals, lower domain
        res_h = 0.0
        for ym in (0.015, 0.03, 0.05):
            yv = -ym
            r = 2.0 * math.sqrt(ym)
            lo, hi = r + 0.05, 1.0 - r - 0.05
            if hi <= lo:
                continue
            xs_h = np.linspace(lo, hi, 13)

            def u_fn(xa, ya):
                xa = np.atleast_1d(np.asarray(xa, dtype=float))
                ya = np.atleast_1d(np.asarray(ya, dtype=float))
                root = 2.0 * np.sqrt(-ya)
                return self._lower_eval(xa - root, xa + root)

            res = pde_residual_hyperbolic(params, u_fn, xs_h,
                                          np.full_like(xs_h, yv))
            res_h = max(res_h, float(np.max(np.abs(res))))
        rep.add("pde_hyperbolic", res_h / scale, self.tol_pde)

        # interior equation residuals, upper domain
        y_grid = np.linspace(0.0, 0.3, 31)
        res_p = 0.0
        upper_scale = max(float(np.max(np.abs(self.field_.par_u))), 1e-30)
        for xline in (0.3, 0.7):
            def u_pt(xq, yq):
                return float(self._upper_row(np.array([xq]), float(yq), data)[0])

            _, res = pde_residual_parabolic(params, u_pt, self.trace_,
                                            xline, y_grid)
            res_p = max(res_p, float(np.max(np.abs(res[4:]))))
        rep.add("pde_parabolic", res_p / upper_scale, 10.0 * self.tol_pde)

        # interface trace vanishes at the origin with flat slope
        h = self.trace_.nodes[1]
        t0 = abs(float(self.trace_.values[0]))
        slope = abs(4.0 * float(self.trace_(h)) - float(self.trace_(2.0 * h))) / (2.0 * h)
        rep.add("trace_origin", max(t0, slope), 1e-2)

        rep.add("heat_kernel_gate", _heat_gate_residual(), 1e-6)
        return rep
