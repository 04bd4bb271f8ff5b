"""Constructive solver for a mixed parabolic-hyperbolic problem.

A fractional-in-time parabolic equation on the upper strip is glued to
a degenerate hyperbolic equation on the lower characteristic triangle;
the package reduces the coupled problem to a weakly singular Volterra
equation on the interface, evaluates both half-domain representations,
and verifies each construction step by independent residual checks.
"""

from .boundary import BoundaryData, validate_inputs
from .gridfn import GridFunction, uniform_grid
from .hyperbolic import (CharacteristicPoint, ProblemParameters,
                         derive_parameters)
from .solver import (DiagnosticsReport, MixedProblemSolver, SolutionField,
                     export_diagnostics, export_field)
from .specfun import ConvergenceError, SeriesTolerance, even_bessel, wright_e

__version__ = "0.1.0"

__all__ = [
    "BoundaryData",
    "CharacteristicPoint",
    "ConvergenceError",
    "DiagnosticsReport",
    "GridFunction",
    "MixedProblemSolver",
    "ProblemParameters",
    "SeriesTolerance",
    "SolutionField",
    "derive_parameters",
    "even_bessel",
    "export_diagnostics",
    "export_field",
    "uniform_grid",
    "validate_inputs",
    "wright_e",
    "__version__",
]
