"""Command-line front end: solve, verify, kernels."""

import argparse
import json
import math
import os
import sys

import numpy as np

from .boundary import BoundaryData
from .fracops import (SmoothFunction, bessel_weighted_integral,
                      bessel_weighted_integral_reduced, transmute_fwd,
                      transmute_inv)
from .gridfn import uniform_grid
from .hyperbolic import aux_density, char_forcing, density_from_flux, \
    derive_parameters, u_from_densities
from .solver import MixedProblemSolver, export_diagnostics, export_field
from .specfun import even_bessel
from .volterra import solve_volterra, solve_weakly_singular

_DEFAULTS = {
    "alpha": -0.25,
    "delta": 0.5,
    "lambda2": 0.0,
    "psi": {"coeffs": [0.0]},
    "trace1": {"coeffs": [0.0]},
    "trace2": {"coeffs": [0.0]},
    "grids": {"line_n": 401, "par_nx": 101, "par_ny": 101, "hyp_n": 101},
    "tolerances": {"char_bc": 1e-3, "gluing": 1e-3,
                   "trace_identity": 1e-3, "pde": 1e-2},
}

_SCHEMA = {
    "alpha": float,
    "delta": float,
    "lambda2": float,
    "psi": {"coeffs": list},
    "trace1": {"coeffs": list},
    "trace2": {"coeffs": list},
    "grids": {"line_n": int, "par_nx": int, "par_ny": int, "hyp_n": int},
    "tolerances": {"char_bc": float, "gluing": float,
                   "trace_identity": float, "pde": float},
}


def _reject_unknown(cfg, schema, prefix=""):
    if not isinstance(cfg, dict):
        raise ValueError("config section %s must be a mapping" % (prefix or "<root>"))
    for key, val in cfg.items():
        if key not in schema:
            raise ValueError("unknown config key: %s%s" % (prefix, key))
        sub = schema[key]
        if isinstance(sub, dict):
            _reject_unknown(val, sub, prefix + key + ".")


def _merge(defaults, cfg):
    out = {}
    for key, dval in defaults.items():
        if key in cfg:
            if isinstance(dval, dict):
                out[key] = _merge(dval, cfg[key])
            else:
                out[key] = cfg[key]
        else:
            out[key] = dval
    return out


def load_config(path):
    with open(path) as fh:
        raw = json.load(fh)
    _reject_unknown(raw, _SCHEMA)
    return _merge(_DEFAULTS, raw)


def _solver_from_config(cfg):
    g = cfg["grids"]
    t = cfg["tolerances"]
    return MixedProblemSolver(alpha=float(cfg["alpha"]),
                              delta=float(cfg["delta"]),
                              lambda2=float(cfg["lambda2"]),
                              line_n=int(g["line_n"]), par_nx=int(g["par_nx"]),
                              par_ny=int(g["par_ny"]), hyp_n=int(g["hyp_n"]),
                              tol_char_bc=float(t["char_bc"]),
                              tol_gluing=float(t["gluing"]),
                              tol_trace_identity=float(t["trace_identity"]),
                              tol_pde=float(t["pde"]))


def _data_from_config(cfg):
    return BoundaryData(psi_coeffs=tuple(float(c) for c in cfg["psi"]["coeffs"]),
                        trace1_coeffs=tuple(float(c) for c in cfg["trace1"]["coeffs"]),
                        trace2_coeffs=tuple(float(c) for c in cfg["trace2"]["coeffs"]))


def cmd_solve(args):
    try:
        cfg = load_config(args.config)
        solver = _solver_from_config(cfg)
        data = _data_from_config(cfg)
        solver.fit(data)
    except (ValueError, TypeError, RuntimeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    os.makedirs(args.out, exist_ok=True)
    export_field(solver.field_, args.out)
    export_diagnostics(solver.diagnostics_, args.out)
    sys.stdout.write(solver.diagnostics_.to_text())
    if args.strict and not solver.diagnostics_.all_passed():
        print("strict mode: diagnostics failed", file=sys.stderr)
        return 1
    return 0


def _check(lines, name, value, tol):
    ok = value <= tol
    lines.append("%s %.6e %.6e %s" % (name, value, tol, "PASS" if ok else "FAIL"))
    return ok


def _verify_round_trips():
    worst = 0.0
    xs = np.linspace(0.0, 1.0, 50)
    polys = {"quadratic": SmoothFunction.from_poly([0.0, 0.0, 1.0]),
             "quartic": SmoothFunction.from_poly([0.0, 0.0, 0.0, 1.0, -1.0])}
    for g in polys.values():
        for k in (0.0, 0.3):
            pts = xs[xs >= k]
            for lam2 in (-4.0, 0.0, 4.0):
                fwd_then_inv = transmute_inv(
                    k, lam2, lambda t: np.atleast_1d(transmute_fwd(k, lam2, g, t)), pts)
                inv_then_fwd = transmute_fwd(
                    k, lam2, lambda t: np.atleast_1d(transmute_inv(k, lam2, g, t)), pts)
                worst = max(worst,
                            float(np.max(np.abs(fwd_then_inv - g(pts)))),
                            float(np.max(np.abs(inv_then_fwd - g(pts)))))
    return worst


def _verify_kernel_identity():
    g = SmoothFunction.from_poly([0.0, 0.0, 1.0, -1.0])
    xs = np.linspace(0.05, 1.0, 20)
    worst = 0.0
    for lam2 in (0.0, 1.0):
        direct = bessel_weighted_integral(-0.75, lam2, g, xs)
        reduced = bessel_weighted_integral_reduced(-0.75, lam2, g, xs)
        worst = max(worst, float(np.max(np.abs(direct - reduced))))
    return worst


def _verify_volterra_order():
    errs = []
    for n in (101, 201, 401):
        grid = uniform_grid(n)
        beta_val = 16.0 / 15.0
        rhs = grid ** 2 - 0.7 * beta_val * grid ** 2.5
        sol = solve_weakly_singular(grid, rhs, -0.5, 0.7)
        errs.append(float(np.max(np.abs(sol - grid ** 2))))
    order = math.log(errs[0] / errs[2]) / math.log(4.0) if errs[2] > 0 else 4.0
    return errs[-1], order


def _verify_forcing_forms():
    """Boundary residual of the end-to-end solve under each forcing form.

    The three forms differ in the sign convention and kernel argument
    of the spectral correction; only the default one closes the
    boundary condition, and this comparison records the gap.
    """
    params = derive_parameters(-0.25, 0.5, 1.0)
    data = BoundaryData(psi_coeffs=(0.0, 0.0, 0.0, 0.0, 1.0))
    base = char_forcing(params, data)
    grid = uniform_grid(201)
    etas = np.linspace(0.05, 1.0, 15)
    out = {}
    for form in base.FORMS:
        view = _ForcingView(base, form)
        flux = solve_volterra(params, view, grid)
        dens_vals = density_from_flux(params, flux.values, view(grid))
        aux_vals = aux_density(params, dens_vals, flux.values)
        dens = flux.with_values(dens_vals)
        auxf = flux.with_values(aux_vals)
        u_char = u_from_densities(params, dens, auxf, np.zeros_like(etas), etas)
        out[form] = float(np.max(np.abs(u_char - data.psi(etas / 2.0))))
    return out


class _ForcingView:
    """Fixed-form adapter so pipeline stages see a plain forcing object."""

    def __init__(self, forcing, form):
        self._forcing = forcing
        self._form = form
        self.p = forcing.p
        self.power = forcing.power

    def scaled(self, t):
        return self._forcing.scaled(t, form=self._form)

    def __call__(self, t):
        return self._forcing(t, form=self._form)


def cmd_verify(args):
    from .solver import _heat_gate_residual

    lines = []
    ok = True
    ok &= _check(lines, "transmute_round_trip", _verify_round_trips(), 1e-7)
    ok &= _check(lines, "kernel_identity_dual_route", _verify_kernel_identity(), 1e-6)
    err, order = _verify_volterra_order()
    ok &= _check(lines, "volterra_manufactured", err, 1e-5)
    ok &= _check(lines, "volterra_order_margin", max(0.0, 1.5 - order), 1e-12)
    ok &= _check(lines, "heat_kernel_gate", _heat_gate_residual(), 1e-6)
    forms = _verify_forcing_forms()
    for form, val in forms.items():
        tol = 1e-3 if form == "fwd" else float("inf")
        _check(lines, "forcing_form_%s" % form, val, tol)
    ok &= forms["fwd"] <= 1e-3
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_kernels(args):
    if args.wmax < args.wmin:
        print("error: wmax must be >= wmin", file=sys.stderr)
        return 1
    ws = np.linspace(args.wmin, args.wmax, args.count)
    vals = even_bessel(args.gamma, ws)
    for w, v in zip(ws, np.atleast_1d(vals)):
        print("%.17g %.17g" % (w, v))
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="mixedpde",
                                     description="mixed parabolic-hyperbolic solver")
    sub = parser.add_subparsers(dest="command", required=True)
    p_solve = sub.add_parser("solve", help="run the pipeline and export the field")
    p_solve.add_argument("--config", required=True)
    p_solve.add_argument("--out", required=True)
    p_solve.add_argument("--strict", action="store_true",
                         help="exit nonzero when a diagnostic fails")
    p_solve.set_defaults(fn=cmd_solve)
    p_verify = sub.add_parser("verify", help="run the identity and property suites")
    p_verify.set_defaults(fn=cmd_verify)
    p_kern = sub.add_parser("kernels", help="tabulate the even Bessel kernel")
    p_kern.add_argument("--gamma", type=float, required=True)
    p_kern.add_argument("--wmin", type=float, required=True)
    p_kern.add_argument("--wmax", type=float, required=True)
    p_kern.add_argument("--count", type=int, default=21)
    p_kern.set_defaults(fn=cmd_kernels)
    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
