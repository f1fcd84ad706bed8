"""Exception taxonomy with machine-readable codes.

Every failure mode the library reports maps to one exception class carrying a
stable ``code`` string; the CLI serializes that code into report envelopes so
callers never have to parse messages.  Exceptions that can report partial
results (best value so far, pole location estimate, ...) carry them as
attributes.
"""

from __future__ import annotations


class HankelplError(Exception):
    """Base class; ``code`` is the machine-readable identifier."""

    code = "ERROR"

    def __init__(self, message: str, **data):
        super().__init__(message)
        self.data = data

    def __getattr__(self, name):
        try:
            return self.__dict__["data"][name]
        except KeyError:
            raise AttributeError(name) from None


class NonconvergenceError(HankelplError):
    """Quadrature depth exhausted; carries ``value`` and ``err_est`` (best so far)."""

    code = "NONCONVERGENCE"


class PoleEncountered(HankelplError):
    """ODE integration halted near a pole; carries ``location`` and partial ``solution``."""

    code = "POLE_ENCOUNTERED"


class StepUnderflow(HankelplError):
    code = "STEP_UNDERFLOW"


class DivergedError(HankelplError):
    code = "DIVERGED"


class SingularJacobian(HankelplError):
    code = "SINGULAR_JACOBIAN"


class SingularMatrix(HankelplError):
    """A Hankel pivot underflowed certified precision (some pi_k may not exist)."""

    code = "SINGULAR"


class BranchCutError(HankelplError):
    code = "BRANCH_CUT"


class DomainError(HankelplError):
    code = "DOMAIN"


class SeriesLaunchFailed(HankelplError):
    code = "SERIES_LAUNCH_FAILED"


class DivisionNearZero(HankelplError):
    code = "DIVISION_NEAR_ZERO"


class AssertionFailed(HankelplError):
    """A sign-region (or similar) assertion failed; carries the offending ``point``."""

    code = "ASSERTION_FAILED"


class EvaluationFailed(HankelplError):
    code = "EVALUATION_FAILED"


class PrecisionExhausted(HankelplError):
    """Precision-doubling certificate failed to reach the requested digits at the cap."""

    code = "PRECISION_EXHAUSTED"


class UsageError(HankelplError):
    code = "USAGE"
