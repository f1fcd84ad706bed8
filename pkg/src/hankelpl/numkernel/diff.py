"""Central finite differences with Richardson extrapolation.

Step policy: h = 2^(-P/4) scaled by |x|, which balances truncation against
rounding when the evaluations themselves are accurate to ~2^-P.  Two
Richardson levels by default; the returned error estimate is the difference
between the last two extrapolation levels (heuristic, not certified).
"""

from __future__ import annotations

from typing import Callable

import mpmath
from mpmath import mpf

from ..errors import EvaluationFailed
from ..precision import workprec


def _central(g, x, h, order):
    if order == 1:
        return (g(x + h) - g(x - h)) / (2 * h)
    if order == 2:
        return (g(x + h) - 2 * g(x) + g(x - h)) / (h * h)
    raise ValueError("order must be 1 or 2")


def finite_diff(g: Callable, x, order: int, prec: int, levels: int = 2,
                h0=None):
    """Estimate g^(order)(x); returns (value, error_estimate).

    Evaluation failures inside ``g`` propagate as EvaluationFailed.
    """
    with workprec(prec):
        x = mpmath.mpmathify(x)
        h = mpf(h0) if h0 is not None else \
            mpf(2) ** (-(prec // 4)) * max(mpf(1), abs(x))

        def safe(z):
            try:
                return g(z)
            except Exception as exc:  # noqa: BLE001 - contract: propagate as code
                raise EvaluationFailed(f"integrand evaluation failed at {z}") from exc

        # Richardson table for the h^2 error expansion of central stencils
        rows = []
        for lev in range(levels + 1):
            rows.append(_central(safe, x, h / (2 ** lev), order))
        table = [rows]
        for j in range(1, levels + 1):
            prev = table[-1]
            fac = mpf(4) ** j
            table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1)
                          for i in range(len(prev) - 1)])
        best = table[-1][0]
        err = abs(best - table[-2][0]) if levels >= 1 else abs(best) * mpf('1e-6')
        return +best, +err
