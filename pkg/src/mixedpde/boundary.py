"""Problem data: the characteristic boundary function and lateral traces.

The boundary function psi lives on [0, 1/2] and must vanish to third
order at 0; the lateral traces enter through their regularized form
(the y^(1-delta)-scaled limits), each a polynomial with zero constant
term.  Polynomials keep third derivatives exact, which the forcing
assembly consumes analytically.
"""

from dataclasses import dataclass, field

import numpy as np


def _poly_deriv(coeffs, order):
    c = np.asarray(coeffs, dtype=float)
    for _ in range(order):
        if len(c) <= 1:
            return np.zeros(1)
        c = c[1:] * np.arange(1, len(c))
    return c


def _polyval(coeffs, x):
    c = np.asarray(coeffs, dtype=float)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for ck in c[::-1]:
        out = out * x + ck
    return out


@dataclass(frozen=True)
class BoundaryData:
    """psi_coeffs: ascending coefficients of psi (degree <= 12).

    trace1_coeffs / trace2_coeffs: ascending coefficients of the scaled
    lateral traces at x=0 and x=1 (zero constant term required).
    """
    psi_coeffs: tuple = (0.0,)
    trace1_coeffs: tuple = (0.0,)
    trace2_coeffs: tuple = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "psi_coeffs", tuple(float(c) for c in self.psi_coeffs))
        object.__setattr__(self, "trace1_coeffs", tuple(float(c) for c in self.trace1_coeffs))
        object.__setattr__(self, "trace2_coeffs", tuple(float(c) for c in self.trace2_coeffs))
        if len(self.psi_coeffs) > 13:
            raise ValueError("psi degree must not exceed 12")

    # boundary function and derivatives
    def psi(self, x):
        return _polyval(self.psi_coeffs, x)

    def psi_d3(self, x):
        return _polyval(_poly_deriv(self.psi_coeffs, 3), x)

    # psi'''(s/2) = s^p * psi0(s): p is the lowest surviving power
    def psi_d3_order(self):
        d3 = _poly_deriv(self.psi_coeffs, 3)
        nz = np.nonzero(np.abs(d3) > 0.0)[0]
        return int(nz[0]) if len(nz) else 0

    def psi_d3_reduced(self, s):
        """psi0 with psi'''(s/2) = s^p * psi0(s); psi0(0) != 0."""
        d3 = _poly_deriv(self.psi_coeffs, 3)
        p = self.psi_d3_order()
        red = d3[p:] / (2.0 ** (p + np.arange(len(d3) - p))) if len(d3) > p else np.zeros(1)
        return _polyval(red, s)

    def trace1(self, y):
        return _polyval(self.trace1_coeffs, y)

    def trace2(self, y):
        return _polyval(self.trace2_coeffs, y)

    def is_zero(self):
        return (not np.any(self.psi_coeffs)) and (not np.any(self.trace1_coeffs)) \
            and (not np.any(self.trace2_coeffs))


def validate_inputs(params, data):
    """Check the solvability hypotheses; returns (ok, list of messages).

    Rejections name the violated hypothesis instead of raising, so the
    caller can surface all problems at once.
    """
    problems = []
    c = np.asarray(data.psi_coeffs)
    # psi and its first two derivatives must vanish at 0
    for m in range(3):
        d = _poly_deriv(c, m)
        if len(d) and d[0] != 0.0:
            problems.append(f"boundary function derivative order {m} nonzero at 0")
    p = data.psi_d3_order()
    p_min = -2.0 - 2.0 * params.beta
    if not p > p_min:
        problems.append(f"boundary function regularity exponent p={p} "
                        f"must exceed {p_min:g}")
    for name, coeffs in (("trace1", data.trace1_coeffs), ("trace2", data.trace2_coeffs)):
        if len(coeffs) and coeffs[0] != 0.0:
            problems.append(f"scaled {name} must vanish at y=0")
    return (len(problems) == 0, problems)
