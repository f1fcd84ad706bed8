"""Painleve I integration and the double-scaling extraction engine.

Tritronquee expansion: y_0(z) = sqrt(-z/6) [1 + sum_k a_k (-z)^{-5k/2}] as
z -> infinity in -pi/5 < arg z < 7 pi/5.  Writing S(u) = 1 + sum a_k u^k with
u = x^{-5/2} (x = -z), the equation y'' = 6 y^2 + z becomes
D^2 S - S/4 = sqrt(6) u^{-1} (S^2 - 1) with D = -(5/2) u d/du, giving

    a_{k+1} = (25 k^2 - 1) a_k / (8 sqrt 6) - (1/2) sum_{i+j=k+1} a_i a_j,

so a_1 = -1/(8 sqrt 6), a_2 = -49/768, ...; the series is factorially
divergent and is summed to its smallest term (tail estimate = first omitted
term).  p1_solve seeds (y, y') from the series at a large negative s_start and
Taylor-continues; H = y'^2/2 - 2 y^3 - s y is tracked and |H' + y| monitored
through the dense output (H' = -y along exact solutions).

Extraction: given finite-n data at t(s*) = t_cr - s* n^{-4/5} / kappa with
kappa = (2 a_cr)^{-3/5} (a_cr b_cr)^{-1/2} (b_cr - a_cr)^{2/5}, each
leading-plus-first-correction asymptotic is inverted for the Painleve I datum:

    beta_nn  = (b-a)^2/16 - ((2a(b-a))^{4/5}/4) y n^{-2/5} + O(n^{-3/5})
    a_nn     = (t/sqrt(ab)) (1 - 2^{4/5} y / (a^{1/5}(b-a)^{1/5} n^{2/5}) + ...)
    dH/dt    = -(n^2/4) (sqrt(a/b)+sqrt(b/a)-2
                         - (2(b-a)^{4/5}/((2a)^{1/5} sqrt(ab))) y n^{-2/5} + ...)
    gamma^2  = (2/(pi(b-a))) e^{-nl} (1 + 2(2a)^{4/5} H /((b-a)^{1/5} n^{1/5}) + ...)

(a = a_cr, b = b_cr).  One function y_alpha(s*) must emerge from the first
three and H_alpha(s*) from the fourth, with H' = -y and y'' = 6 y^2 + s*;
pi_consistency_check reports cross-source spreads, finite-difference residuals
over the s*-grid and the n-trend.  Which alpha the weight's constant selects
is not asserted; records are labeled by (n, t, alpha).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import mpmath
from mpmath import mp, mpf, mpc

from .errors import DomainError, PoleEncountered
from .numkernel import OdeSpec, SolutionGrid, ode_solve
from .numkernel.series import Series
from .equilibrium import critical_constants, g_and_l
from .orthopoly import hankel_derivatives, recurrence_table
from .precision import workprec
from .weight import WeightParams, moment_table


# -- tritronquee series ------------------------------------------------------

@dataclass
class TritronqueeSeries:
    K: int
    coeffs: List[object]          # a_1..a_K
    prec: int

    def eval(self, z, tol=None, derivative: bool = False):
        """y_0(z) (and optionally y_0'(z)) with the smallest-term tail bound.

        Sums to the smallest term or order K; raises DOMAIN if the tail bound
        exceeds tol (default: no check).
        """
        with workprec(self.prec):
            z = mpmath.mpmathify(z)
            x = -z
            rx = mpmath.sqrt(x / 6)
            u = x ** (-mpf(5) / 2)
            s = mp.one
            sp = mp.zero               # dS/dx where S = 1 + sum a_k x^{-5k/2}
            tail = None
            uk = mp.one
            prev = None
            for k in range(1, self.K + 1):
                uk = uk * u
                term = self.coeffs[k - 1] * uk
                if prev is not None and abs(term) > abs(prev):
                    tail = abs(prev)
                    break
                s += term
                sp += term * (-mpf(5) * k / 2) / x
                prev = term
            else:
                tail = abs(prev) if prev is not None else mp.zero
            if tol is not None and tail > mpf(tol):
                raise DomainError(
                    f"series tail estimate {mpmath.nstr(tail, 3)} above tolerance at z={z}")
            y = rx * s
            if not derivative:
                return y, +tail
            # y = sqrt(x/6) S(x), dy/dz = -dy/dx
            dydx = s / (2 * mpmath.sqrt(6 * x)) + rx * sp
            return y, -dydx, +tail


def tritronquee_series(K: int, prec: int) -> TritronqueeSeries:
    """Coefficients a_1..a_K by the quadratic recurrence above."""
    if K < 1:
        raise ValueError("K >= 1 required")
    with workprec(prec):
        r6 = mpmath.sqrt(mpf(6))
        a = [mpf(-1) / (8 * r6)]
        for k in range(1, K):
            conv = mp.zero
            for i in range(1, k + 1):
                j = k + 1 - i
                if 1 <= j <= len(a):
                    conv += a[i - 1] * a[j - 1]
            a.append((25 * k * k - 1) * a[k - 1] / (8 * r6) - conv / 2)
        return TritronqueeSeries(K=K, coeffs=a, prec=prec)


def residual_slope_check(K: int, zs: Sequence, prec: int):
    """log-log slope of the formal plug-back residual of the order-K series.

    Returns (slopes, expected) where expected = -5(K+1)/2 - ... in the x
    variable; the residual of y'' - 6y^2 - z scales like x^{1/2} u^{K+1}
    ~ x^{(1-5(K+1)... the slope is measured empirically between sample points.
    """
    ser = tritronquee_series(K, prec)
    with workprec(prec):
        resids = []
        for z in zs:
            z = mpf(z)
            h = mpf(2) ** (-prec // 6) * abs(z)
            ys = []
            for dz in (-h, 0, h):
                y, _t = ser.eval(z + dz)
                ys.append(y)
            ypp = (ys[2] - 2 * ys[1] + ys[0]) / (h * h)
            resids.append(abs(ypp - 6 * ys[1] ** 2 - z))
        slopes = []
        for i in range(len(zs) - 1):
            slopes.append(float(mpmath.log(resids[i + 1] / resids[i])
                                / mpmath.log(abs(mpf(zs[i + 1])) / abs(mpf(zs[i])))))
        return resids, slopes


# -- Painleve I IVP ----------------------------------------------------------

def p1_field(s, y):
    yy, yp = y
    return [yp, 6 * yy * yy + s]


@dataclass
class P1Solution:
    s_start: object
    s_end: object
    grid: SolutionGrid
    series_tail_at_start: object
    pole_estimate: Optional[object] = None

    def eval(self, s, derivative: int = 0):
        return self.grid.eval(s, component=0, derivative=derivative)

    def hamiltonian(self, s):
        y = self.grid.eval(s, 0)
        yp = self.grid.eval(s, 1)
        return yp * yp / 2 - 2 * y ** 3 - s * y

    def hprime_plus_y_max(self, samples: Sequence):
        """max |dH/ds + y| over samples, via the dense local series."""
        worst = mpf(0)
        for s in samples:
            tk, hk, sers = self.grid._locate(s)
            tau = s - tk
            yser = sers[0]
            ypser = sers[1]
            sser = Series.variable(tk, yser.order)
            hser = ypser * ypser / 2 - 2 * yser * yser * yser - sser * yser
            val = hser.diff()(tau) + yser(tau)
            worst = max(worst, abs(val))
        return worst


def p1_solve(s_start, s_end, K_init: int, prec: int, tol=None,
             ode_spec: Optional[OdeSpec] = None) -> P1Solution:
    """Integrate y'' = 6y^2 + s from tritronquee data at s_start toward s_end.

    Poles are reported as data: on POLE_ENCOUNTERED the partial trajectory is
    returned with pole_estimate set (the first real pole of the continued
    solution is never asserted to exist or not).
    """
    with workprec(prec):
        s_start = mpf(s_start)
        s_end = mpf(s_end)
        if s_start >= -5:
            raise DomainError("s_start must be large negative (series region)")
        tol = mpf(tol) if tol is not None else mpf(10) ** -(prec // 6)
        ser = tritronquee_series(K_init, prec)
        y0, yp0, tail = ser.eval(s_start, derivative=True)
        spec = ode_spec or OdeSpec(rel_tol=float(tol), abs_tol=float(tol),
                                   order=max(24, min(40, prec // 16)),
                                   blowup=1e8)
        pole = None
        try:
            grid = ode_solve(p1_field, s_start, [y0, yp0], s_end, spec, prec)
        except PoleEncountered as exc:
            grid = exc.data["solution"]
            pole = exc.data["location"]
        return P1Solution(s_start=s_start, s_end=s_end, grid=grid,
                          series_tail_at_start=tail, pole_estimate=pole)


# -- double-scaling extraction ------------------------------------------------

def scaling_kappa(prec: int):
    """kappa with s* = kappa n^{4/5} (t_cr - t)."""
    with workprec(prec):
        cc = critical_constants(prec)
        a, b = cc.a_cr, cc.b_cr
        return (2 * a) ** (-mpf(3) / 5) / mpmath.sqrt(a * b) * \
            (b - a) ** (mpf(2) / 5)


def sstar_of(n: int, t, prec: int):
    with workprec(prec):
        cc = critical_constants(prec)
        return scaling_kappa(prec) * mpf(n) ** (mpf(4) / 5) * (cc.t_cr - mpf(t))


def t_of_sstar(n: int, sstar, prec: int):
    with workprec(prec):
        cc = critical_constants(prec)
        return cc.t_cr - mpf(sstar) / (scaling_kappa(prec) * mpf(n) ** (mpf(4) / 5))


@dataclass
class FiniteNInputs:
    n: int
    t: object
    alpha: object
    beta_nn: object
    a_nn: object
    gamma2_nn: object
    dHdt: object
    H: object
    l: object
    certified_digits: Optional[int] = None


@dataclass
class ExtractionRecord:
    n: int
    t: object
    alpha: object
    sstar: object
    y_beta: object
    y_ann: object
    y_dh: object
    h_est: object
    pole_suspect: bool
    inputs: FiniteNInputs


def extract_suite(n: int, t, inputs: FiniteNInputs, prec: int,
                  pole_cap: float = 10.0) -> ExtractionRecord:
    """Invert the four asymptotics for (y, H) at s* = s*(n, t)."""
    with workprec(prec):
        cc = critical_constants(prec)
        a, b = cc.a_cr, cc.b_cr
        t = mpf(t)
        n25 = mpf(n) ** (mpf(2) / 5)
        n15 = mpf(n) ** (mpf(1) / 5)
        y_beta = ((b - a) ** 2 / 16 - inputs.beta_nn) * 4 * n25 \
            / (2 * a * (b - a)) ** (mpf(4) / 5)
        y_ann = (1 - inputs.a_nn * mpmath.sqrt(a * b) / t) \
            * a ** (mpf(1) / 5) * (b - a) ** (mpf(1) / 5) * n25 / mpf(2) ** (mpf(4) / 5)
        c0 = mpmath.sqrt(a / b) + mpmath.sqrt(b / a) - 2
        c1 = 2 * (b - a) ** (mpf(4) / 5) / ((2 * a) ** (mpf(1) / 5) * mpmath.sqrt(a * b))
        y_dh = (c0 + 4 * inputs.dHdt / mpf(n) ** 2) * n25 / c1
        h_est = (inputs.gamma2_nn * mpmath.pi * (b - a) / 2
                 * mpmath.exp(mpf(n) * inputs.l) - 1) \
            * (b - a) ** (mpf(1) / 5) * n15 / (2 * (2 * a) ** (mpf(4) / 5))
        sstar = sstar_of(n, t, prec)
        suspect = any(abs(v) > mpf(pole_cap)
                      for v in (y_beta, y_ann, y_dh, h_est))
        return ExtractionRecord(n=n, t=+t, alpha=inputs.alpha, sstar=+sstar,
                                y_beta=+mpmath.re(y_beta) if mpmath.im(y_beta) == 0 else +y_beta,
                                y_ann=+y_ann, y_dh=+y_dh, h_est=+h_est,
                                pole_suspect=suspect, inputs=inputs)


def finite_n_inputs(n: int, t, alpha, delta, prec: int,
                    l_prec: int = 320,
                    check_margin: int = 0) -> FiniteNInputs:
    """All finite-n data for one (n, t): one recurrence table + derivatives + l.

    check_margin > 0 reruns the moment->recurrence chain at prec+margin and
    records the agreement digits (the pipeline's certificate).
    """
    params = WeightParams(n=n, t=t, alpha=alpha, delta=delta)
    with workprec(prec):
        table = moment_table(params, 2 * n + 1, prec, jmin=0)
        check = moment_table(params, 2 * n + 1, prec + check_margin, jmin=0) \
            if check_margin > 0 else None
        rt = recurrence_table(n, table, check_table=check)
        der = hankel_derivatives(n, params, prec)
        gl = g_and_l(t, l_prec)
        return FiniteNInputs(
            n=n, t=mpf(t), alpha=alpha,
            beta_nn=rt.beta[n], a_nn=rt.a[n], gamma2_nn=rt.gamma2[n],
            dHdt=der.dHdt, H=der.H, l=mpf(gl.l),
            certified_digits=rt.certified_digits)


@dataclass
class ConsistencyReport:
    """Cross-source spreads, PI residuals and n-trends over the s*-grid."""

    n_list: List[int]
    sstar_grid: List[object]
    records: Dict[int, List[ExtractionRecord]]
    spread_beta_ann: Dict[int, List[object]] = field(default_factory=dict)
    spread_beta_dh: Dict[int, List[object]] = field(default_factory=dict)
    pi_residuals: Dict[int, List[Optional[object]]] = field(default_factory=dict)
    hprime_residuals: Dict[int, List[Optional[object]]] = field(default_factory=dict)
    trend_pairs: List[tuple] = field(default_factory=list)


def pi_consistency_check(records: Dict[int, List[ExtractionRecord]],
                         prec: int = 192) -> ConsistencyReport:
    """Assemble the Theorems-2/3 consistency report from extraction records.

    For each n: per-point |y_beta - y_ann| and |y_beta - y_dh|; centered
    second differences of y over the uniform s*-grid feed |y'' - 6y^2 - s*|;
    centered first differences of H feed |H' + y|; across n the per-point
    spreads are paired into shrinkage ratios.  Report-only.
    """
    with workprec(prec):
        ns = sorted(records)
        grid = [r.sstar for r in records[ns[0]]]
        rep = ConsistencyReport(n_list=ns, sstar_grid=grid, records=records)
        for n in ns:
            recs = records[n]
            rep.spread_beta_ann[n] = [abs(r.y_beta - r.y_ann) for r in recs]
            rep.spread_beta_dh[n] = [abs(r.y_beta - r.y_dh) for r in recs]
            h = recs[1].sstar - recs[0].sstar
            pir: List[Optional[object]] = [None] * len(recs)
            hpr: List[Optional[object]] = [None] * len(recs)
            for i in range(1, len(recs) - 1):
                trio = (recs[i - 1], recs[i], recs[i + 1])
                if any(r.pole_suspect for r in trio):
                    continue
                y = [mpmath.re(r.y_beta) for r in trio]
                ypp = (y[2] - 2 * y[1] + y[0]) / (h * h)
                pir[i] = abs(ypp - 6 * y[1] ** 2 - recs[i].sstar)
                hh = [mpmath.re(r.h_est) for r in trio]
                hp = (hh[2] - hh[0]) / (2 * h)
                hpr[i] = abs(hp + y[1])
            rep.pi_residuals[n] = pir
            rep.hprime_residuals[n] = hpr
        for lo, hi in zip(ns, ns[1:]):
            a = rep.spread_beta_ann[lo]
            b = rep.spread_beta_ann[hi]
            shrunk = sum(1 for i in range(len(a)) if b[i] < a[i])
            rep.trend_pairs.append((lo, hi, shrunk, len(a)))
        return rep
