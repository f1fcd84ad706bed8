"""Numeric substrate: quadrature, ODE stepping, root finding, differentiation.

Everything here is pure and deterministic: identical inputs and precision give
bit-identical outputs.  Reductions run in a fixed order regardless of how the
caller batches work.
"""

from .segments import PathSegment
from .quadrature import QuadratureSpec, quad_segment, quad_path
from .series import Series
from .ode import OdeSpec, SolutionGrid, ode_solve
from .roots import newton_solve
from .diff import finite_diff
from .bessel import besseli_int, besselk_int, besselj_int

__all__ = [
    "PathSegment", "QuadratureSpec", "quad_segment", "quad_path",
    "Series", "OdeSpec", "SolutionGrid", "ode_solve",
    "newton_solve", "finite_diff",
    "besseli_int", "besselk_int", "besselj_int",
]
