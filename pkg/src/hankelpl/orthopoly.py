"""Hankel determinants, recurrence coefficients, RH boundary data, identities.

Everything is driven by a MomentTable.  One unpivoted Doolittle factorization
of the (K+1) x (K+1) Hankel matrix (mu_{i+j}) yields all leading-minor
determinants D_1..D_{K+1} as pivot products (the nesting property), the monic
polynomial coefficient vectors by triangular solves, and from those

    gamma_k^2 = D_k / D_{k+1},   beta_k = D_{k+1} D_{k-1} / D_k^2,
    pi_k(z) = z^k + p_k z^{k-1} + ...,  alpha_k = p_k - p_{k+1},
    a_k = alpha_k - (2k+1+n)/n.

The map from moments to this data is exponentially ill-conditioned (the LU
cancels ~log2(max|mu|^k / |D_k|) bits, measured ~3.2 k^2 near t_cr), so every
factorization records its lost bits and callers size precision accordingly.

hankel_logdet keeps the spec contract (pivoted factorization, P vs 2P
certificate); H_{k,n} = t d/dt log D_k and its t-derivative are computed by
high-order central differences over fresh moment tables, with branch-aligned
complex logs along the stencil.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp, mpf, mpc

from .errors import SingularMatrix
from .numkernel import QuadratureSpec, quad_segment
from .precision import agreement_digits, workprec
from .weight import (Contour, MomentTable, WeightParams, build_contour,
                     moment_table, weight_constant)

def _two_pi_i():
    return mpc(0, 2) * mpmath.pi


def hankel_prec_estimate(K: int, digits: int = 30) -> int:
    """Working precision that survives the LU cancellation for size K."""
    return int(3.3 * K * K + 8 * K + 3.33 * digits + 192)


@dataclass
class HankelFactorization:
    """Unpivoted LU of the leading size x size Hankel block."""

    size: int
    logdets: List[object]          # logdets[k] = log D_k, k = 0..size (D_0 = 1)
    lower: List[List[object]]      # unit lower factor (strict part stored)
    upper: List[List[object]]
    lost_bits: List[float]         # per k, log2(max|mu|^k / |D_k|)
    real: bool

    def logdet(self, k: int):
        return self.logdets[k]

    def det(self, k: int):
        return mpmath.exp(self.logdets[k])


def factor_hankel(table: MomentTable, size: int, prec: Optional[int] = None) -> HankelFactorization:
    """Doolittle factorization of (mu_{i+j})_{i,j<size}; raises SingularMatrix."""
    prec = prec or table.prec
    if table.jmax < 2 * size - 2:
        raise ValueError("moment table too short for requested size")
    with workprec(prec):
        real = table.params.is_real_symmetric(prec)
        mus = [table.value(i) for i in range(0, 2 * size - 1)]
        if real:
            mus = [mpmath.re(m) for m in mus]
        maxmu = max(abs(m) for m in mus) if mus else mpf(1)
        A = [[mus[i + j] for j in range(size)] for i in range(size)]
        L = [[mp.zero] * size for _ in range(size)]
        logdet = mp.zero
        logdets = [mp.zero]
        lost = [0.0]
        tiny = maxmu * mpf(2) ** (-(prec - 16))
        for k in range(size):
            piv = A[k][k]
            if abs(piv) <= tiny:
                raise SingularMatrix(
                    f"Hankel pivot {k} underflowed certified precision "
                    f"(pi_{k} may not exist)", index=k)
            logdet = logdet + mpmath.log(piv)
            logdets.append(+logdet)
            lost.append(float((k + 1) * mpmath.log(maxmu, 2)
                              - mpmath.re(logdet) / mpmath.log(2)))
            for i in range(k + 1, size):
                f = A[i][k] / piv
                L[i][k] = f
                row_i = A[i]
                row_k = A[k]
                for j in range(k, size):
                    row_i[j] -= f * row_k[j]
        return HankelFactorization(size=size, logdets=logdets, lower=L,
                                   upper=A, lost_bits=lost, real=real)


def _solve_monic(fact: HankelFactorization, table: MomentTable, k: int, prec: int):
    """Coefficients [c_0..c_{k-1}] of pi_k from the embedded leading LU."""
    if k == 0:
        return []
    with workprec(prec):
        rhs = [-table.value(j + k) for j in range(k)]
        if fact.real:
            rhs = [mpmath.re(v) for v in rhs]
        # forward substitution with unit lower factor
        y = [mp.zero] * k
        for i in range(k):
            s = rhs[i]
            for j in range(i):
                s -= fact.lower[i][j] * y[j]
            y[i] = s
        x = [mp.zero] * k
        for i in range(k - 1, -1, -1):
            s = y[i]
            for j in range(i + 1, k):
                s -= fact.upper[i][j] * x[j]
            x[i] = s / fact.upper[i][i]
        return x


@dataclass
class HankelData:
    k: int
    logD: object
    prec: int
    certified_digits: Optional[int] = None
    lost_bits: float = 0.0


def hankel_logdet(k: int, params: WeightParams, prec: int,
                  digits: Optional[int] = None,
                  table_factory: Callable = None,
                  certify: bool = True) -> HankelData:
    """log D_k by pivoted triangular factorization, with a P vs 2P certificate.

    The pivoted route is the spec contract for this operation; the pivot
    product is |det| and the permutation sign folds into the imaginary part.
    """
    factory = table_factory or (lambda p: moment_table(params, max(2 * k - 2, 0), p, jmin=0))

    def run(p):
        table = factory(p)
        with workprec(p):
            size = k
            mus = [table.value(i) for i in range(0, 2 * size - 1)]
            real = params.is_real_symmetric(p)
            if real:
                mus = [mpmath.re(m) for m in mus]
            A = [[mus[i + j] for j in range(size)] for i in range(size)]
            maxmu = max(abs(m) for m in mus)
            tiny = maxmu * mpf(2) ** (-(p - 16))
            logdet = mp.zero
            swaps = 0
            for kk in range(size):
                piv_row = max(range(kk, size), key=lambda r: abs(A[r][kk]))
                if abs(A[piv_row][kk]) <= tiny:
                    raise SingularMatrix(
                        f"pivot {kk} underflowed certified precision", index=kk)
                if piv_row != kk:
                    A[kk], A[piv_row] = A[piv_row], A[kk]
                    swaps += 1
                piv = A[kk][kk]
                logdet = logdet + mpmath.log(piv)
                for i in range(kk + 1, size):
                    f = A[i][kk] / piv
                    for j in range(kk, size):
                        A[i][j] -= f * A[kk][j]
            if swaps % 2:
                logdet = logdet + mpc(0, 1) * mpmath.pi
            return +logdet

    if k == 0:
        return HankelData(k=0, logD=mp.zero, prec=prec, certified_digits=10**6)
    if not certify:
        return HankelData(k=k, logD=run(prec), prec=prec)
    lo = run(prec)
    hi = run(2 * prec)
    agreed = agreement_digits(lo, hi)
    want = digits if digits is not None else 1
    if agreed < want:
        lo = run(2 * prec)
        hi = run(4 * prec)
        agreed = agreement_digits(lo, hi)
        if agreed < want:
            raise SingularMatrix(
                f"precision doubling failed to certify {want} digits", index=k)
    return HankelData(k=k, logD=hi, prec=prec, certified_digits=agreed)


@dataclass
class RecurrenceTable:
    """gamma^2, beta, p, alpha, a and monic coefficients for k <= K."""

    params: WeightParams
    K: int
    prec: int
    logD: Dict[int, object] = field(default_factory=dict)
    gamma2: Dict[int, object] = field(default_factory=dict)
    beta: Dict[int, object] = field(default_factory=dict)
    p: Dict[int, object] = field(default_factory=dict)
    alpha: Dict[int, object] = field(default_factory=dict)
    a: Dict[int, object] = field(default_factory=dict)
    coeffs: Dict[int, List[object]] = field(default_factory=dict)
    orth_residual: Dict[int, object] = field(default_factory=dict)
    lost_bits: float = 0.0
    certified_digits: Optional[int] = None

    def pi_eval(self, k: int, z):
        """pi_k(z) by Horner on [c_0..c_{k-1}, 1]."""
        acc = mpmath.mpmathify(1)
        for c in reversed(self.coeffs[k]):
            acc = acc * z + c
        return acc

    def pi_at_zero(self, k: int):
        return self.coeffs[k][0] if k > 0 else mpmath.mpmathify(1)


def recurrence_table(K: int, table: MomentTable,
                     check_table: Optional[MomentTable] = None) -> RecurrenceTable:
    """Recurrence data for k <= K from one factorization of size K+1.

    Requires table.jmax >= 2K+1 (the pi_{K+1} right-hand side).  When
    check_table (same params at higher precision) is supplied, the whole
    computation reruns there and the minimum agreement over the key outputs is
    recorded as certified_digits.
    """
    def build(tab: MomentTable) -> RecurrenceTable:
        prec = tab.prec
        with workprec(prec):
            n, t = tab.params.nt(prec)
            size = K + 1
            fact = factor_hankel(tab, size, prec)
            rt = RecurrenceTable(params=tab.params, K=K, prec=prec)
            rt.lost_bits = max(fact.lost_bits)
            for k in range(size + 1):
                rt.logD[k] = fact.logdets[k]
            for k in range(K + 1):
                rt.gamma2[k] = mpmath.exp(fact.logdets[k] - fact.logdets[k + 1])
            for k in range(1, K + 1):
                rt.beta[k] = mpmath.exp(fact.logdets[k + 1] + fact.logdets[k - 1]
                                        - 2 * fact.logdets[k])
            for k in range(K + 2):
                c = _solve_monic(fact, tab, k, prec) if k <= size else None
                if k <= size:
                    rt.coeffs[k] = c
                    rt.p[k] = c[k - 1] if k >= 1 else mp.zero
            for k in range(K + 1):
                rt.alpha[k] = rt.p[k] - rt.p[k + 1]
                rt.a[k] = rt.alpha[k] - mpf(2 * k + 1 + n) / n
            # orthogonality residuals, normalized by |gamma_k^{-2}|
            for k in range(1, K + 1):
                c = rt.coeffs[k] + [mpmath.mpmathify(1)]
                worst = mpf(0)
                for j in range(k):
                    s = mp.zero
                    for m, cm in enumerate(c):
                        s += cm * tab.value(j + m)
                    worst = max(worst, abs(s))
                rt.orth_residual[k] = worst * abs(mpmath.exp(-fact.logdets[k]
                                                             + fact.logdets[k + 1]))
            return rt

    rt = build(table)
    if check_table is not None:
        hi = build(check_table)
        agree = min(
            min(agreement_digits(rt.logD[k], hi.logD[k]) for k in range(1, K + 2)),
            min(agreement_digits(rt.p[k], hi.p[k]) for k in range(1, K + 2)),
        )
        hi.certified_digits = agree
        return hi
    return rt


@dataclass
class YBoundaryData:
    k: int
    Y11: object
    Y12: object
    Y21: object
    Y22: object
    Yminus1_12: object
    Yminus1_21: object
    c_kn: object
    q_kn: object
    det_y0: object
    gamma2_from_y: object


def y_boundary(k: int, rt: RecurrenceTable, table: MomentTable,
               method: str = "expand",
               contour: Optional[Contour] = None,
               quad_spec: Optional[QuadratureSpec] = None) -> YBoundaryData:
    """Boundary values Y(0), the leading Cauchy coefficients and c_kn, q_kn.

    method "expand" evaluates the Cauchy integrals through the moment table
    (int pi_k w z^{m} reduces to moments); "quad" integrates them directly on
    the contour.  Requires k >= 1, table.jmin = -1 and table.jmax >= 2k.
    """
    if k < 1:
        raise ValueError("y_boundary requires k >= 1")
    prec = table.prec
    with workprec(prec):
        n, t = table.params.nt(prec)
        twopii = _two_pi_i()
        ck = list(rt.coeffs[k]) + [mpmath.mpmathify(1)]
        ckm1 = list(rt.coeffs[k - 1]) + [mpmath.mpmathify(1)]
        g2km1 = rt.gamma2[k - 1]

        if method == "expand":
            int_pik_over_z = sum(ck[m] * table.value(m - 1) for m in range(k + 1))
            int_pikm1_over_z = sum(ckm1[m] * table.value(m - 1) for m in range(k))
            int_pik_zk = sum(ck[m] * table.value(m + k) for m in range(k + 1))
        elif method == "quad":
            cont = contour or build_contour(table.params, mpf(10) ** -(prec // 4), prec,
                                            jmax=2 * k)
            spec = quad_spec or QuadratureSpec(abs_tol=float(mpf(2) ** (-prec + 16)),
                                               rel_tol=float(mpf(2) ** (-prec + 16)))

            def cauchy(poly_coeffs, power):
                total = mpc(0)
                for seg, label in cont.pieces:
                    c = weight_constant(label, table.params, prec)

                    def f(z, _c=c):
                        if z == 0:
                            return mpc(0)
                        acc = mp.zero
                        for cm in reversed(poly_coeffs):
                            acc = acc * z + cm
                        w = mpmath.exp(-n * (z - mpmath.log(z) + t / z))
                        return _c * acc * z ** power * w

                    from .weight import _origin_spec
                    v, _e = quad_segment(f, seg, _origin_spec(spec, seg, n, power), prec)
                    total += v
                return total

            int_pik_over_z = cauchy(ck, -1)
            int_pikm1_over_z = cauchy(ckm1, -1)
            int_pik_zk = cauchy(ck, k)
        else:
            raise ValueError(f"unknown y_boundary method {method!r}")

        y11 = rt.pi_at_zero(k)
        y12 = int_pik_over_z / twopii
        y21 = -twopii * g2km1 * rt.pi_at_zero(k - 1)
        y22 = -g2km1 * int_pikm1_over_z
        ym12 = -int_pik_zk / twopii
        ym21 = -twopii * g2km1
        c_kn = y11 * y12
        q_kn = -y21 / y11
        det_y0 = y11 * y22 - y12 * y21
        gamma2_from_y = -1 / (twopii * ym12)
        return YBoundaryData(k=k, Y11=y11, Y12=y12, Y21=y21, Y22=y22,
                             Yminus1_12=ym12, Yminus1_21=ym21,
                             c_kn=c_kn, q_kn=q_kn, det_y0=det_y0,
                             gamma2_from_y=gamma2_from_y)


def _align_logs(vals: Sequence) -> List[object]:
    """Shift each log by 2 pi i multiples to vary smoothly along a stencil."""
    ref = vals[len(vals) // 2]
    out = []
    twopi = 2 * mpmath.pi
    for v in vals:
        kshift = mpmath.nint((mpmath.im(ref) - mpmath.im(v)) / twopi)
        out.append(v + mpc(0, 1) * twopi * kshift)
    return out


@dataclass
class HankelDerivatives:
    k: int
    t: object
    H: object
    dHdt: object
    h: object
    agreement_digits: int


def hankel_derivatives(k: int, params: WeightParams, prec: int,
                       h=None, table_factory: Callable = None) -> HankelDerivatives:
    """H_{k,n} = t (log D_k)' and d/dt H_{k,n} by 5-point stencils.

    Fresh moment tables are built at the stencil points (the spec's route; the
    analytic d/dt identity is used only as a cross-check in identity_suite).
    The same quantities recomputed at step h/2 give the agreement certificate.
    """
    factory = table_factory or (
        lambda tt, p: moment_table(
            WeightParams(params.n, tt, params.alpha, params.delta),
            max(2 * k - 2, 0), p, jmin=0))
    with workprec(prec):
        n, t = params.nt(prec)
        if h is None:
            h = mpf(2) ** (-min(prec // 8, 200)) * max(abs(t), mpf(1))
        else:
            h = mpf(h)

        def logD(tt):
            tab = factory(tt, prec)
            fact = factor_hankel(tab, k, prec)
            return fact.logdets[k]

        def derive(hh):
            vals = _align_logs([logD(t + i * hh) for i in range(-2, 3)])
            d1 = (-vals[4] + 8 * vals[3] - 8 * vals[1] + vals[0]) / (12 * hh)
            d2 = (-vals[4] + 16 * vals[3] - 30 * vals[2] + 16 * vals[1]
                  - vals[0]) / (12 * hh * hh)
            return t * d1, d1 + t * d2

        H1, dH1 = derive(h)
        H2, dH2 = derive(h / 2)
        agreed = min(agreement_digits(H1, H2), agreement_digits(dH1, dH2))
        return HankelDerivatives(k=k, t=t, H=H2, dHdt=dH2, h=h,
                                 agreement_digits=agreed)


@dataclass
class IdentityReport:
    """Normalized residuals of the four differential identities."""

    k: int
    n: int
    t: object
    r_a_vs_y: object        # a_k = 2 pi i t gamma_k^2 Y11(0) Y12(0)
    r_dh_vs_y: object       # dH/dt = -n^2 Y12(0) Y21(0)
    r_beta_vs_h: object     # n^2 beta_k = k(k+n) + t dH/dt - H
    r_h_vs_suma: object     # H = -n sum_{j<k} a_j
    r_p_derivative: object  # cross-check d p_k/dt = (dH/dt)/n
    gamma2_route_digits: int
    det_y_error: object
    ingredients: dict


def identity_suite(k: int, n: int, t, alpha, delta, prec: int,
                   y_method: str = "expand") -> IdentityReport:
    """Evaluate the Lemma residuals at (k, n, t); report-only, never asserts."""
    params = WeightParams(n=n, t=t, alpha=alpha, delta=delta)
    with workprec(prec):
        table = moment_table(params, 2 * (k + 1) + 1, prec, jmin=-1)
        rt = recurrence_table(k + 1, table)
        y = y_boundary(k, rt, table, method=y_method)
        der = hankel_derivatives(k, params, prec)
        tt = mpf(t)
        twopii = _two_pi_i()

        lhs_a = rt.a[k]
        rhs_a = twopii * tt * rt.gamma2[k] * y.Y11 * y.Y12
        r1 = abs(lhs_a - rhs_a) / (1 + abs(lhs_a))

        rhs_dh = -mpf(n) ** 2 * y.Y12 * y.Y21
        r2 = abs(der.dHdt - rhs_dh) / (1 + abs(der.dHdt))

        lhs_b = mpf(n) ** 2 * rt.beta[k]
        rhs_b = mpf(k) * (k + n) + tt * der.dHdt - der.H
        r3 = abs(lhs_b - rhs_b) / (1 + abs(lhs_b))

        suma = sum(rt.a[j] for j in range(k))
        r4 = abs(der.H + n * suma) / (1 + abs(der.H))

        # cross-check via dw/dt = -(n/z) w: d p_k/dt = (dH/dt)/n
        hstep = der.h

        def p_of(tt2):
            tab2 = moment_table(WeightParams(n, tt2, alpha, delta),
                                2 * k + 1, prec, jmin=0)
            rt2 = recurrence_table(k, tab2)
            return rt2.p[k]

        dp = (p_of(tt + hstep) - p_of(tt - hstep)) / (2 * hstep)
        r5 = abs(dp - der.dHdt / n) / (1 + abs(dp))

        g2_digits = agreement_digits(rt.gamma2[k], y.gamma2_from_y)
        det_err = abs(y.det_y0 - 1)

        return IdentityReport(
            k=k, n=n, t=tt, r_a_vs_y=+r1, r_dh_vs_y=+r2, r_beta_vs_h=+r3,
            r_h_vs_suma=+r4, r_p_derivative=+r5,
            gamma2_route_digits=g2_digits, det_y_error=+det_err,
            ingredients={
                "a_k": lhs_a, "gamma2_k": rt.gamma2[k], "beta_k": rt.beta[k],
                "H": der.H, "dHdt": der.dHdt, "Y11": y.Y11, "Y12": y.Y12,
                "Y21": y.Y21, "Y22": y.Y22, "c_kn": y.c_kn, "q_kn": y.q_kn,
            })


def mgf(n: int, t, alpha, delta, prec: int):
    """M_n(nt) = D_n[w;t] / D_n[w;0] via the log-determinant difference."""
    with workprec(prec):
        pt = WeightParams(n=n, t=t, alpha=alpha, delta=delta)
        p0 = WeightParams(n=n, t=0, alpha=alpha, delta=delta)
        tab_t = moment_table(pt, max(2 * n - 2, 0), prec, jmin=0)
        tab_0 = moment_table(p0, max(2 * n - 2, 0), prec, jmin=0)
        f_t = factor_hankel(tab_t, n, prec)
        f_0 = factor_hankel(tab_0, n, prec)
        return mpmath.exp(f_t.logdets[n] - f_0.logdets[n])
