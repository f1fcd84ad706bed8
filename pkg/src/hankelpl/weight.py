"""The singularly perturbed Laguerre weight on deformed contours, and moments.

Weight: w(z; t) = c_j exp(-n V_t(z)) on Gamma_j with V_t(z) = z - log z + t/z
(principal log, arg z in (-pi, pi)), c_1 = 1, c_2 = alpha, c_3 = 1 - alpha.
The defining contour is Gamma_2 (upper semicircle |z - delta| = delta, run
from 0 to 2 delta), Gamma_3 (lower semicircle, 0 to 2 delta) and Gamma_1 (the
ray from 2 delta outward, truncated at a computed cutoff).

Moments mu_j = int_Gamma z^j w dz.  Quadrature on the literal circle cannot
reach high relative accuracy near the origin endpoint (|exp(-n t/z)| is
constant there while its phase diverges like tan(theta/2), damped only by
|z|^{n+j}), so computations run over Cauchy-equivalent deformations:

  * t >= 0: both semicircles collapse onto the segment [0, 2 delta], where
    exp(-n t/x) (or x^n at t = 0) kills the endpoint;
  * t <  0: each semicircle is bent to leave the origin along arg z = +-3pi/4,
    where |exp(-n t/z)| decays like exp(-0.7 n |t| / |z|).

The sweep between the original and deformed paths stays inside sectors where
the integrand is bounded, so the integrals are equal; the "circle" style is
kept for loose-tolerance definition and orientation tests.

Closed forms used as oracles and fast paths (nu = j + n + 1):

  t > 0:  mu_j = 2 t^{nu/2} K_nu(2 n sqrt t)
  t = 0:  mu_j = (j + n)! / n^{j+n+1}
  t < 0:  mu_j = 2 e^{i pi nu/2} (-t)^{nu/2} K_nu(2 n i sqrt(-t))
               + (1 - alpha) 2 pi i (-t)^{nu/2} J_nu(2 n sqrt(-t))

(the t < 0 form is the continuation through Im t > 0 plus the residue loop
that carries the alpha-dependence; it is validated against contour quadrature
in the tests).  Consecutive moments obey the three-term recurrence

  n mu_j = (n + j) mu_{j-1} + n t mu_{j-2}

obtained by integrating (z^j w)' over Gamma (boundary terms cancel because
c_2 + c_3 = c_1), which seeds full tables from two evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import mpmath
from mpmath import mp, mpf, mpc

from .errors import BranchCutError, DomainError
from .numkernel import PathSegment, QuadratureSpec, quad_segment
from .numkernel.bessel import besselj_int, besselk_int
from .precision import workprec


@dataclass(frozen=True)
class WeightParams:
    """Problem parameters (n, t, alpha, delta)."""

    n: int
    t: object          # real (mpf-able); may be negative
    alpha: object      # complex contour constant
    delta: object      # circle radius parameter, > 0

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError("n >= 1 required")
        if not mpf(self.delta) > 0:
            raise ValueError("delta > 0 required")

    def nt(self, prec: int) -> Tuple[int, mpf]:
        with workprec(prec):
            return int(self.n), mpf(self.t)

    def alpha_mpc(self, prec: int) -> mpc:
        with workprec(prec):
            return mpc(self.alpha)

    def is_real_symmetric(self, prec: int) -> bool:
        """True when conjugation symmetry makes all moments real (alpha=1/2, t real)."""
        with workprec(prec):
            return mpc(self.alpha) == mpc(0.5) and mpmath.im(mpmath.mpmathify(self.t)) == 0


@dataclass(frozen=True)
class Contour:
    """Oriented segments with their weight-constant labels (1, 2 or 3)."""

    pieces: Tuple[Tuple[PathSegment, int], ...]
    style: str                 # circle | bent | collapsed
    truncation: object         # ray cutoff R
    params: WeightParams


def v_potential(z, t, prec: int):
    """V_t(z) = z - log z + t/z, principal branch; BRANCH_CUT on (-inf, 0]."""
    with workprec(prec):
        z = mpmath.mpmathify(z)
        if mpmath.im(z) == 0 and mpmath.re(z) <= 0:
            raise BranchCutError(f"z = {z} lies on the branch cut (-inf, 0]")
        return z - mpmath.log(z) + t / z


def weight_constant(j: int, params: WeightParams, prec: int):
    with workprec(prec):
        alpha = params.alpha_mpc(prec)
        return {1: mpc(1), 2: alpha, 3: 1 - alpha}[j]


def eval_weight(z, branch_j: int, params: WeightParams, prec: int):
    """c_j exp(-n V_t(z)) for branch j in {1, 2, 3}."""
    if branch_j not in (1, 2, 3):
        raise ValueError("branch must be 1, 2 or 3")
    with workprec(prec):
        n, t = params.nt(prec)
        c = weight_constant(branch_j, params, prec)
        return c * mpmath.exp(-n * v_potential(z, t, prec))


def ray_truncation(params: WeightParams, truncation_tol, jmax: int, prec: int):
    """Cutoff R with int_R^inf x^{jmax} e^{-n Re V_t} dx below truncation_tol.

    Uses the bound int_R^inf x^M e^{-nx} dx <= R^M e^{-nR} / (n (1 - M/(nR)))
    for nR > M, times e^{n|t|/R} when t < 0; R grows until the bound holds.
    """
    with workprec(prec):
        n, t = params.nt(prec)
        tol = mpf(truncation_tol)
        M = jmax + n
        R = mpf(max(4, 2 * (M + 1) / n))
        for _ in range(500):
            bound = R ** M * mpmath.exp(-n * R) / (n * (1 - mpf(M) / (n * R)))
            if t < 0:
                bound *= mpmath.exp(n * abs(t) / R)
            if bound < tol:
                return +R
            R *= mpf('1.25')
        return +R


def build_contour(params: WeightParams, truncation_tol, prec: int,
                  style: str = "auto", jmax: int = 0) -> Contour:
    """Assemble Gamma as oriented segments in the requested style."""
    with workprec(prec):
        n, t = params.nt(prec)
        d = mpf(params.delta)
        if style == "auto":
            style = "bent" if t < 0 else "collapsed"
        R = ray_truncation(params, truncation_tol, jmax, prec)
        # log-spaced ray pieces: one Gauss-Legendre panel must never face the
        # full dynamic range of x^j e^{-n x} (its order-doubling error check
        # can accept an under-resolved peak)
        cuts = [2 * d]
        p = mpf(1)
        while p < R:
            if p > cuts[-1] * mpf('1.5'):
                cuts.append(p)
            p *= 4
        cuts.append(R)
        ray_pieces = [(PathSegment.line(cuts[i], cuts[i + 1]), 1)
                      for i in range(len(cuts) - 1)]
        if style == "circle":
            g2 = [(PathSegment.arc(d, d, mpmath.pi, 0), 2)]
            g3 = [(PathSegment.arc(d, d, -mpmath.pi, 0), 3)]
        elif style == "collapsed":
            if t < 0:
                raise DomainError("collapsed style requires t >= 0")
            g2 = [(PathSegment.line(0, 2 * d), 2)]
            g3 = [(PathSegment.line(0, 2 * d), 3)]
        elif style == "bent":
            r0 = mpf('0.5')
            e_up = r0 * mpmath.exp(mpc(0, 3) * mpmath.pi / 4)
            e_dn = mpmath.conj(e_up)
            g2 = [(PathSegment.line(0, e_up), 2), (PathSegment.line(e_up, 2 * d), 2)]
            g3 = [(PathSegment.line(0, e_dn), 3), (PathSegment.line(e_dn, 2 * d), 3)]
        else:
            raise ValueError(f"unknown contour style {style!r}")
        return Contour(pieces=tuple(g2 + g3 + ray_pieces), style=style,
                       truncation=R, params=params)


def _origin_spec(base: QuadratureSpec, seg: PathSegment, n: int, j: int):
    """Attach the algebraic-vanishing hint z^{n+j} at an origin endpoint."""
    a, b = seg.endpoints()
    if abs(a) == 0:
        return QuadratureSpec(abs_tol=base.abs_tol, rel_tol=base.rel_tol,
                              max_depth=base.max_depth, singular_end="start",
                              decay_exponent=float(n + j))
    if abs(b) == 0:
        return QuadratureSpec(abs_tol=base.abs_tol, rel_tol=base.rel_tol,
                              max_depth=base.max_depth, singular_end="end",
                              decay_exponent=float(n + j))
    return base


def moment(j: int, params: WeightParams, spec: QuadratureSpec, prec: int,
           contour: Optional[Contour] = None) -> Tuple[mpc, mpf]:
    """mu_j by contour quadrature; returns (value, error_estimate)."""
    with workprec(prec):
        n, t = params.nt(prec)
        if contour is None:
            contour = build_contour(params, mpf(spec.abs_tol) / 8, prec,
                                    jmax=max(j, 0))
        total = mpc(0)
        err = mpf(0)
        for seg, label in contour.pieces:
            c = weight_constant(label, params, prec)

            def f(z, _c=c):
                if z == 0:
                    return mpc(0)
                return _c * z ** j * mpmath.exp(-n * (z - mpmath.log(z) + t / z))

            sspec = _origin_spec(spec, seg, n, j)
            v, e = quad_segment(f, seg, sspec, prec)
            total += v
            err += e
        return +total, +err


def moment_oracle(j: int, params: WeightParams, prec: int):
    """Closed form 2 t^{nu/2} K_nu(2 n sqrt t); defined only for t > 0."""
    with workprec(prec):
        n, t = params.nt(prec)
        if not t > 0:
            raise DomainError("moment_oracle requires t > 0")
        nu = j + n + 1
        return 2 * t ** (mpf(nu) / 2) * besselk_int(nu, 2 * n * mpmath.sqrt(t), prec)


def _mu_closed_negative_t(j: int, n: int, t, alpha, prec: int):
    """Continuation-plus-residue closed form for t < 0 (see module docstring)."""
    with workprec(prec):
        T = -t
        nu = j + n + 1
        rootT = mpmath.sqrt(T)
        base = 2 * mpmath.exp(mpc(0, 1) * mpmath.pi * nu / 2) * T ** (mpf(nu) / 2) \
            * besselk_int(nu, 2 * n * mpc(0, 1) * rootT, prec)
        resid = 2 * mpmath.pi * mpc(0, 1) * T ** (mpf(nu) / 2) \
            * besselj_int(nu, 2 * n * rootT, prec)
        return base + (1 - alpha) * resid


@dataclass
class MomentTable:
    """Moments mu_j for j in [jmin, jmax] with error estimates."""

    params: WeightParams
    prec: int
    method: str
    jmin: int
    jmax: int
    mu: Dict[int, object] = field(default_factory=dict)
    err: Dict[int, object] = field(default_factory=dict)

    def value(self, j: int):
        return self.mu[j]

    def err_est(self, j: int):
        return self.err[j]

    def values(self, js) -> List[object]:
        return [self.mu[j] for j in js]


def moment_table(params: WeightParams, jmax: int, prec: int,
                 method: str = "auto", jmin: int = -1,
                 quad_spec: Optional[QuadratureSpec] = None) -> MomentTable:
    """Build mu_j for jmin <= j <= jmax.

    method "bessel" seeds the three-term recurrence with the closed forms
    (fast; all t); "quadrature" integrates every j directly (slow; the
    validation route); "auto" picks bessel.
    """
    if jmin < -1:
        raise ValueError("jmin >= -1 required (z^{n-1} integrability)")
    if method == "auto":
        method = "bessel"
    with workprec(prec):
        n, t = params.nt(prec)
        alpha = params.alpha_mpc(prec)
        table = MomentTable(params=params, prec=prec, method=method,
                            jmin=jmin, jmax=jmax)
        ulp = mpf(2) ** (-prec)
        if method == "quadrature":
            spec = quad_spec or QuadratureSpec(abs_tol=float(mpf(2) ** (-prec + 16)),
                                               rel_tol=float(mpf(2) ** (-prec + 16)))
            contour = build_contour(params, mpf(spec.abs_tol) / 8, prec, jmax=jmax)
            for j in range(jmin, jmax + 1):
                v, e = moment(j, params, spec, prec, contour=contour)
                table.mu[j] = v
                table.err[j] = e
            return table
        if method != "bessel":
            raise ValueError(f"unknown moment method {method!r}")

        def closed(j):
            if t > 0:
                nu = j + n + 1
                return mpc(2 * t ** (mpf(nu) / 2)
                           * besselk_int(nu, 2 * n * mpmath.sqrt(t), prec))
            if t == 0:
                return mpc(mpmath.factorial(j + n) / mpf(n) ** (j + n + 1))
            return _mu_closed_negative_t(j, n, t, alpha, prec)

        m_prev2 = closed(jmin)
        m_prev = closed(jmin + 1)
        table.mu[jmin] = m_prev2
        table.mu[jmin + 1] = m_prev
        table.err[jmin] = abs(m_prev2) * ulp
        table.err[jmin + 1] = abs(m_prev) * ulp
        for j in range(jmin + 2, jmax + 1):
            m = mpf(n + j) / n * m_prev + t * m_prev2
            table.mu[j] = m
            table.err[j] = (mpf(n + j) / n * table.err[j - 1]
                            + abs(t) * table.err[j - 2] + abs(m) * ulp)
            m_prev2, m_prev = m_prev, m
        return table
