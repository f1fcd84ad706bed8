"""Adaptive Taylor-series ODE integration with pole detection.

Each step expands the solution about t0 by Picard iteration on truncated
power series: with y known through order m, one pass of

    y  <-  y0 + integral of field(t_series, y_series)

extends the expansion by one order, and the field may be any callable built
from +,-,*,/ (rational right-hand sides included), evaluated on Series
objects.  The step size comes from the tail coefficients, which also estimate
the local radius of convergence: solutions of Painleve equations are
meromorphic, so a shrinking radius with growing solution magnitude signals a
pole, whose location is estimated from the last coefficient ratio.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from typing import Callable, List, Optional, Sequence

import mpmath
from mpmath import mp, mpf

from ..errors import PoleEncountered, StepUnderflow
from ..precision import workprec
from .series import Series


@dataclass(frozen=True)
class OdeSpec:
    rel_tol: float = 1e-30
    abs_tol: float = 1e-30
    order: int = 28              # Taylor truncation per step
    max_steps: int = 100000
    safety: float = 0.7
    blowup: float = 1e12         # |y| above this triggers pole reporting
    pole_radius_floor: float = 0.0  # halt when radius estimate drops below


@dataclass
class SolutionGrid:
    """Dense-output trajectory: local Taylor pieces on [t_k, t_k + h_k]."""

    t0: object
    t1: object
    pieces: List[tuple] = dfield(default_factory=list)  # (t_k, h_k, [Series per comp])
    status: str = "ok"           # ok | pole | step_underflow
    pole_estimate: Optional[object] = None

    def domain(self):
        if not self.pieces:
            return (self.t0, self.t0)
        tk, hk, _ = self.pieces[-1]
        return (self.t0, tk + hk)

    def _locate(self, t):
        lo, hi = 0, len(self.pieces) - 1
        forward = mpmath.re(self.t1 - self.t0) >= 0
        while lo < hi:
            mid = (lo + hi + 1) // 2
            tk = self.pieces[mid][0]
            if (mpmath.re(t) >= mpmath.re(tk)) == forward:
                lo = mid
            else:
                hi = mid - 1
        return self.pieces[lo]

    def eval(self, t, component=0, derivative=0):
        tk, hk, sers = self._locate(t)
        s = sers[component]
        for _ in range(derivative):
            s = s.diff()
        return s(t - tk)

    def sample(self, ts, component=0, derivative=0):
        return [self.eval(t, component, derivative) for t in ts]


def taylor_coeffs(field: Callable, t0, y0: Sequence, order: int) -> List[Series]:
    """Local Taylor expansions of the solution about t0, via Picard passes."""
    ncomp = len(y0)
    ys = [Series([y0_i]) for y0_i in y0]
    for m in range(1, order + 1):
        tser = Series.variable(t0, m - 1)
        cur = [y.pad(m - 1).truncate(m - 1) for y in ys]
        fs = field(tser, cur)
        ys = [fs[i].truncate(m - 1).integrate(y0[i]) for i in range(ncomp)]
    return ys


def _radius_estimate(sers: List[Series]):
    """Root-test estimate of the distance to the nearest singularity."""
    best = None
    for s in sers:
        for k in range(s.order, max(s.order - 3, 0), -1):
            ck = abs(s.c[k])
            if ck > 0:
                r = ck ** (mpf(-1) / k)
                if best is None or r < best:
                    best = r
    return best


def _step_size(sers: List[Series], tol, radius):
    h = None
    for s in sers:
        scale = max(abs(s.c[0]), mpf(1))
        for k in range(s.order, max(s.order - 3, 0), -1):
            ck = abs(s.c[k])
            if ck > 0:
                hk = (tol * scale / ck) ** (mpf(1) / k)
                h = hk if h is None else min(h, hk)
    if h is None:
        h = radius if radius is not None else mpf(1)
    if radius is not None:
        h = min(h, radius / 2)
    return h


def ode_solve(field: Callable, t0, y0: Sequence, t1, spec: OdeSpec,
              prec: int) -> SolutionGrid:
    """Integrate y' = field(t, y) from t0 to t1 (real direction either way).

    ``field(t, y)`` must accept Series arguments and return a list of Series.
    Halts with status "pole" (and a location estimate, raising PoleEncountered)
    when the local series indicates a nearby solution pole; raises
    StepUnderflow when the step collapses without pole evidence.
    """
    with workprec(prec):
        t0 = mpmath.mpmathify(t0)
        t1 = mpmath.mpmathify(t1)
        y = [mpmath.mpmathify(v) for v in y0]
        grid = SolutionGrid(t0=t0, t1=t1)
        if t1 == t0:
            return grid
        direction = mpmath.sign(mpmath.re(t1 - t0)) or mpf(1)
        t = t0
        tol = mpf(min(spec.rel_tol, spec.abs_tol))
        hmin_abs = abs(t1 - t0) * mpf(2) ** (-(prec + 16))
        for _ in range(spec.max_steps):
            remaining = abs(t1 - t)
            if remaining == 0:
                break
            sers = taylor_coeffs(field, t, y, spec.order)
            radius = _radius_estimate(sers)
            ymag = max(abs(s.c[0]) for s in sers)
            near_pole = (
                ymag > spec.blowup
                or (spec.pole_radius_floor > 0 and radius is not None
                    and radius < spec.pole_radius_floor))
            if near_pole:
                # simple-pole location estimate from the top coefficient ratio
                top = sers[0]
                est = None
                if abs(top.c[top.order]) > 0:
                    est = t + top.c[top.order - 1] / top.c[top.order]
                grid.status = "pole"
                grid.pole_estimate = est
                raise PoleEncountered(
                    f"pole of the solution near t = {mpmath.nstr(est, 10) if est is not None else '?'}",
                    location=est, solution=grid)
            h = _step_size(sers, tol, radius) * mpf(spec.safety)
            h = min(h, remaining)
            if h < hmin_abs:
                grid.status = "step_underflow"
                raise StepUnderflow("step size underflow", solution=grid)
            ht = direction * h
            grid.pieces.append((t, ht, sers))
            t = t + ht
            y = [s(ht) for s in sers]
        grid.status = "ok"
        return grid
