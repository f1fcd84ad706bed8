"""Painleve III for the shifted recurrence coefficient a_k(t).

a_k = alpha_k - (2k+1+n)/n satisfies

  a'' = (a')^2/a - a'/t + n(2k+1+n) a^2/t^2 + n^2 a^3/t^2 + n^2/t - n^2/a,

with a(0) = 0, a'(0) = 1.  t = 0 is a fixed singular point: multiplying by
t^2 a and matching powers, the coefficient c_{m+1} of the formal expansion
a = t + c_2 t^2 + ... carries the pivot m^2 - n^2, so the pure power series
exists only through order n (a t^{n+1} log t correction enters beyond it,
matching the integer-order Bessel structure of the moments).  The launch
therefore truncates at order min(requested, n) and starts the Taylor
integrator at a t_0 small enough that the first omitted term (with a |log|
factor) is below tol^2.

The u-transform u(s) = -n t/(s a), s = n i sqrt(-t) (so s^2 = n^2 t,
dt/ds = 2s/n^2) maps to the standard PIII with Theta_0 = n,
Theta_inf = -(2k+n); the first integral n^2 beta = n^2 t c q - H + k(k+n) is
the testable content of the tau-function identity; the Lax matrices A_{-1},
A_{-2} are assembled from gamma^2, c_kn, q_kn and spot-checked against a
finite-difference Phi_lambda Phi^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import mpmath
from mpmath import mp, mpf, mpc

from .errors import DivisionNearZero, DomainError, SeriesLaunchFailed
from .numkernel import OdeSpec, QuadratureSpec, SolutionGrid, ode_solve, quad_segment
from .orthopoly import recurrence_table, y_boundary, hankel_derivatives
from .precision import workprec
from .weight import WeightParams, build_contour, moment_table, weight_constant


@dataclass(frozen=True)
class P3Params:
    k: int
    n: int

    def __post_init__(self):
        if self.k < 0 or self.n < 1:
            raise ValueError("need k >= 0, n >= 1")

    def s_of_t(self, t, prec: int):
        with workprec(prec):
            return self.n * mpc(0, 1) * mpmath.sqrt(mpc(-mpf(t)))

    @property
    def theta0(self):
        return self.n

    @property
    def theta_inf(self):
        return -(2 * self.k + self.n)


def p3_series_coeffs(k: int, n: int, order: int, prec: int):
    """Launch expansion data: ([c_1..c_n], d) with c_1 = 1.

    Derived from the t^{M} coefficient of t^2 a a'' - t^2 (a')^2 + t a a'
    - A a^3 - n^2 a^4 - n^2 t a + n^2 t^2 = 0 with A = n(2k+1+n):

      ((M-2)^2 - n^2) c_{M-1} =
          A T3(M) + n^2 T4(M) - (1/2) sum'_{r+q=M} c_r c_q (r-q)^2

    where T3/T4 are the cubic/quartic convolutions and sum' omits the unknown.
    The pivot vanishes at M - 2 = n: the expansion continues as
    (c_{n+1} + d log t) t^{n+1} + ..., where matching the log-free part of the
    t^{n+2} coefficient forces d = -R/(2n) (R the residual of the degenerate
    order) while c_{n+1} is genuinely free; the moment route supplies it.
    Returns the pure coefficients through order min(order, n) and the forced
    log coefficient d (None when order <= n).
    """
    if n < 1:
        raise SeriesLaunchFailed("series launch needs n >= 1")
    L = min(order, n)
    want_log = order > n
    with workprec(prec):
        A = mpf(n) * (2 * k + 1 + n)
        n2 = mpf(n) ** 2
        c = {1: mpf(1)}
        d = None
        top = (n + 2) if want_log else (L + 1)
        for M in range(3, top + 1):
            m = M - 2
            pivot = mpf(m) ** 2 - n2
            quad = mp.zero
            for r in range(1, M):
                q = M - r
                if q < 1 or r == M - 1 or q == M - 1:
                    continue
                quad += c[r] * c[q] * (r - q) ** 2
            t3 = mp.zero
            for r in range(1, M - 1):
                for q in range(1, M - r):
                    s_ = M - r - q
                    if s_ >= 1:
                        t3 += c[r] * c[q] * c[s_]
            t4 = mp.zero
            for r in range(1, M - 2):
                for q in range(1, M - r - 1):
                    for s_ in range(1, M - r - q):
                        u_ = M - r - q - s_
                        if u_ >= 1:
                            t4 += c[r] * c[q] * c[s_] * c[u_]
            if m == n:
                residual = quad / 2 - A * t3 - n2 * t4
                d = -residual / (2 * n)
                break
            c[M - 1] = (A * t3 + n2 * t4 - quad / 2) / pivot
        return [c[m] for m in range(1, L + 1)], d


def resonant_anchor(k: int, n: int, alpha, delta, prec: int,
                    t_sample=None, negative: bool = False):
    """The free coefficient c_{n+1} of (c_{n+1} + d log|t|) t^{n+1}.

    Fitted from one moment-route sample at a tiny |t| (default 1e-14), far
    below any verification grid; the fit error is O(|t_sample| log) and decays
    with the sample point.
    """
    with workprec(prec):
        ts = mpf(t_sample) if t_sample is not None else mpf('1e-14')
        if negative:
            ts = -abs(ts)
        coeffs, d = p3_series_coeffs(k, n, n + 1, prec)
        ah = hankel_a(k, n, ts, alpha, delta, prec)
        series = sum(coeffs[m] * ts ** (m + 1) for m in range(len(coeffs)))
        return (ah - series - d * ts ** (n + 1) * mpmath.log(abs(ts))) / ts ** (n + 1)


def _poly_mul(a, b, mmax):
    """Product of {(m, l): coeff} truncated to t-order mmax, log-order 3."""
    out = {}
    for (m1, l1), v1 in a.items():
        for (m2, l2), v2 in b.items():
            m = m1 + m2
            l = l1 + l2
            if m > mmax or l > 3:
                continue
            key = (m, l)
            out[key] = out.get(key, mp.zero) + v1 * v2
    return out


def _expansion_f_coeff(cs, ds, k, n, M):
    """(L^0, L^1, L^2) coefficients of t^M in the PIII polynomial form.

    F = t^2 a a'' - t^2 (a')^2 + t a a' - A a^3 - n^2 a^4 - n^2 t a + n^2 t^2
    with a = sum (c_m + d_m log t) t^m; derivatives use d(log t)/dt = 1/t.
    """
    A = mpf(n) * (2 * k + 1 + n)
    n2 = mpf(n) ** 2
    a = {}
    ap_sh = {}    # t * a'
    app_sh = {}   # t^2 * a''
    for m in range(1, M + 1):
        c = cs.get(m, mp.zero)
        d = ds.get(m, mp.zero)
        if c != 0 or d != 0:
            a[(m, 0)] = c
            if d != 0:
                a[(m, 1)] = d
            ap_sh[(m, 0)] = m * c + d
            if d != 0:
                ap_sh[(m, 1)] = m * d
            app_sh[(m, 0)] = (m - 1) * (m * c + d) + m * d
            if d != 0:
                app_sh[(m, 1)] = m * (m - 1) * d
    a2 = _poly_mul(a, a, M)
    f = {}

    def acc(poly, scale):
        for key, v in poly.items():
            f[key] = f.get(key, mp.zero) + scale * v

    acc(_poly_mul(a, app_sh, M), 1)          # t^2 a a''
    acc(_poly_mul(ap_sh, ap_sh, M), -1)      # -t^2 (a')^2
    acc(_poly_mul(a, ap_sh, M), 1)           # t a a'
    acc(_poly_mul(a2, a, M), -A)             # -A a^3
    acc(_poly_mul(a2, a2, M), -n2)           # -n^2 a^4
    for (m, l), v in list(a.items()):        # -n^2 t a
        if m + 1 <= M:
            f[(m + 1, l)] = f.get((m + 1, l), mp.zero) - n2 * v
    f[(2, 0)] = f.get((2, 0), mp.zero) + n2  # +n^2 t^2
    return (f.get((M, 0), mp.zero), f.get((M, 1), mp.zero),
            f.get((M, 2), mp.zero))


def p3_expansion(k: int, n: int, extra: int, prec: int, c_res):
    """Log-completed launch expansion through order n + 1 + extra.

    Returns (cs, ds): a(t) = sum_m (cs[m] + ds[m] log|t|) t^m with cs[m] for
    m <= n from the pure recurrence, ds[n+1] forced, cs[n+1] = c_res (the
    anchored resonant coefficient) and both families determined beyond it by
    the L^0/L^1 coefficient equations
        ((M-2)^2 - n^2) d_{M-1} + R1 = 0,
        ((M-2)^2 - n^2) c_{M-1} + 2 (M-2) d_{M-1} + R0 = 0.
    Orders stay below 2n+2, so no log^2 terms arise (checked).
    """
    with workprec(prec):
        coeffs, d_res = p3_series_coeffs(k, n, n + 1, prec)
        cs = {m + 1: coeffs[m] for m in range(len(coeffs))}
        ds = {m: mp.zero for m in cs}
        cs[n + 1] = mpmath.mpmathify(c_res)
        ds[n + 1] = d_res
        top = n + 1 + min(extra, n)   # keep below the log^2 threshold
        n2 = mpf(n) ** 2
        for u in range(n + 2, top + 1):
            M = u + 1
            pivot = mpf(M - 2) ** 2 - n2
            r0, r1, r2 = _expansion_f_coeff(cs, ds, k, n, M)
            if abs(r2) > mpf(2) ** (-prec // 2):
                raise SeriesLaunchFailed("log^2 residual unexpectedly large")
            ds[u] = -r1 / pivot
            cs[u] = -(r0 + 2 * (M - 2) * ds[u]) / pivot
        return cs, ds


def p3_field(k: int, n: int) -> Callable:
    """Right-hand side as a first-order system [a, a']; Series-compatible."""
    A = n * (2 * k + 1 + n)
    n2 = n * n

    def field(t, y):
        a, ap = y
        rhs = (ap * ap / a - ap / t + A * a * a / (t * t)
               + n2 * a * a * a / (t * t) + n2 / t - n2 / a)
        return [ap, rhs]

    return field


@dataclass
class P3Solution:
    params: P3Params
    t0: object
    launch_coeffs: List[object]
    log_coeff: Optional[object]
    resonant_coeff: Optional[object]
    grid: SolutionGrid

    def eval(self, t, derivative: int = 0):
        return self.grid.eval(t, component=0, derivative=derivative)

    def state(self, t):
        return (self.grid.eval(t, 0), self.grid.eval(t, 1))


def p3_launch_state(cs: dict, ds: dict, t0):
    """(a(t0), a'(t0)) of the log-completed expansion at t0 (either sign)."""
    L = mpmath.log(abs(t0))
    a0 = mp.zero
    ap0 = mp.zero
    for m in sorted(cs):
        c = cs[m]
        d = ds.get(m, mp.zero)
        top = c + d * L
        a0 += top * t0 ** m
        ap0 += (m * top + d) * t0 ** (m - 1)
    return a0, ap0


def p3_solve(k: int, n: int, t_end, prec: int, tol=None,
             alpha='0.5', delta='0.0381',
             t0=None, anchor: str = "moment",
             ode_spec: Optional[OdeSpec] = None) -> P3Solution:
    """Integrate the PIII initial value problem from 0 toward t_end.

    The launch evaluates the expansion about the singular point t = 0 at a
    small t0 on the same side as t_end: pure powers through t^n, then the
    resonant order (c_{n+1} + d log|t|) t^{n+1} with d forced by the equation
    and c_{n+1} anchored from the moment route (anchor="moment"); the lone
    initial conditions do not select a unique solution.  anchor="none" drops
    the resonant order (the c_{n+1}-perturbation then grows like t^{n+1}
    downstream).  Taylor continuation follows; POLE_ENCOUNTERED propagates
    from the stepper with the partial trajectory attached.
    """
    with workprec(prec):
        t_end = mpf(t_end)
        if t_end == 0:
            raise DomainError("t_end must be nonzero")
        tol = mpf(tol) if tol is not None else mpf(10) ** -(prec // 8)
        if anchor == "moment":
            c_res = resonant_anchor(k, n, alpha, delta, prec,
                                    negative=t_end < 0)
            cs, ds = p3_expansion(k, n, 2, prec, c_res)
            d = ds[n + 1]
        elif anchor == "none":
            coeffs, _ = p3_series_coeffs(k, n, n, prec)
            cs = {m + 1: coeffs[m] for m in range(len(coeffs))}
            ds = {}
            d = c_res = None
        else:
            raise ValueError(f"unknown anchor mode {anchor!r}")
        t0 = mpf(t0) if t0 is not None else mpf('1e-10')
        t0 = abs(t0) if t_end > 0 else -abs(t0)
        a0, ap0 = p3_launch_state(cs, ds, t0)
        spec = ode_spec or OdeSpec(rel_tol=float(tol), abs_tol=float(tol),
                                   order=max(24, min(40, prec // 16)))
        grid = ode_solve(p3_field(k, n), t0, [a0, ap0], t_end, spec, prec)
        return P3Solution(params=P3Params(k=k, n=n), t0=t0,
                          launch_coeffs=[cs[m] for m in sorted(cs)], log_coeff=d,
                          resonant_coeff=c_res, grid=grid)


def p3_ode_residual(k: int, n: int, t, a, ap, app, prec: int):
    """Plug (a, a', a'') into the PIII equation; normalized residual."""
    with workprec(prec):
        A = mpf(n) * (2 * k + 1 + n)
        n2 = mpf(n) ** 2
        rhs = (ap * ap / a - ap / t + A * a * a / (t * t)
               + n2 * a * a * a / (t * t) + n2 / t - n2 / a)
        return abs(app - rhs) / (1 + abs(app))


def hankel_a(k: int, n: int, t, alpha, delta, prec: int):
    """a_{k,n}(t) from the moment route (recurrence table)."""
    params = WeightParams(n=n, t=t, alpha=alpha, delta=delta)
    table = moment_table(params, 2 * k + 1, prec, jmin=0)
    rt = recurrence_table(k, table)
    return rt.a[k]


@dataclass
class P3VerifyReport:
    k: int
    n: int
    t_grid: List[object]
    a_hankel: List[object]
    a_ode: List[object]
    max_pointwise: object
    ode_residuals: List[object]     # FD residual of the Hankel route
    max_ode_residual: object
    ratio_at_smallest_t: object     # a(t)/t -> 1 check value


def p3_verify(k: int, n: int, t_grid: Sequence, alpha, delta, prec: int,
              fd_h=None, ode_tol=1e-44) -> P3VerifyReport:
    """Compare Hankel-derived a_{k,n} with the ODE solution on a t-grid."""
    with workprec(prec):
        ts = sorted(mpf(t) for t in t_grid)
        if ts[0] * ts[-1] < 0:
            raise DomainError("grid must stay on one side of t = 0")
        h = mpf(fd_h) if fd_h is not None else mpf(2) ** (-min(prec // 8, 200))
        a_h = [hankel_a(k, n, t, alpha, delta, prec) for t in ts]
        t_far = ts[-1] if abs(ts[-1]) >= abs(ts[0]) else ts[0]
        sol = p3_solve(k, n, t_far, prec, tol=ode_tol, alpha=alpha, delta=delta)
        a_o = [sol.eval(t) for t in ts]
        diffs = [abs(a_h[i] - a_o[i]) for i in range(len(ts))]
        residuals = []
        for t in ts:
            vals = [hankel_a(k, n, t + i * h, alpha, delta, prec)
                    for i in range(-2, 3)]
            ap = (-vals[4] + 8 * vals[3] - 8 * vals[1] + vals[0]) / (12 * h)
            app = (-vals[4] + 16 * vals[3] - 30 * vals[2] + 16 * vals[1]
                   - vals[0]) / (12 * h * h)
            residuals.append(p3_ode_residual(k, n, t, vals[2], ap, app, prec))
        t_small = ts[0] if abs(ts[0]) <= abs(ts[-1]) else ts[-1]
        ratio = hankel_a(k, n, t_small, alpha, delta, prec) / t_small
        return P3VerifyReport(k=k, n=n, t_grid=ts, a_hankel=a_h, a_ode=a_o,
                              max_pointwise=max(diffs),
                              ode_residuals=residuals,
                              max_ode_residual=max(residuals),
                              ratio_at_smallest_t=ratio)


@dataclass
class UTransformReport:
    k: int
    n: int
    t_grid: List[object]
    residuals: List[object]
    max_residual: object
    roundtrip_error: object


def u_transform_check(k: int, n: int, t_grid: Sequence, alpha, delta,
                      prec: int, fd_h=None,
                      a_floor=1e-12) -> UTransformReport:
    """Residual of the standard PIII for u(s) = -n t/(s a), on a t-grid.

    Derivatives come from 5-point t-stencils of the Hankel route and the chain
    rule u'(s) = (2s/n^2) du/dt, u''(s) = (4t/n^2) d2u/dt2 + (2/n^2) du/dt.
    """
    p3p = P3Params(k=k, n=n)
    with workprec(prec):
        ts = [mpf(t) for t in t_grid]
        h = mpf(fd_h) if fd_h is not None else mpf(2) ** (-min(prec // 8, 200))
        n2 = mpf(n) ** 2
        th0 = mpf(p3p.theta0)
        thinf = mpf(p3p.theta_inf)
        residuals = []
        roundtrip = mpf(0)
        for t in ts:
            s = p3p.s_of_t(t, prec)

            def u_of(tt):
                a = hankel_a(k, n, tt, alpha, delta, prec)
                if abs(a) < mpf(a_floor):
                    raise DivisionNearZero(f"|a({tt})| below threshold")
                ss = p3p.s_of_t(tt, prec)
                return -n * tt / (ss * a)

            vals = [u_of(t + i * h) for i in range(-2, 3)]
            u = vals[2]
            du = (-vals[4] + 8 * vals[3] - 8 * vals[1] + vals[0]) / (12 * h)
            d2u = (-vals[4] + 16 * vals[3] - 30 * vals[2] + 16 * vals[1]
                   - vals[0]) / (12 * h * h)
            us = 2 * s / n2 * du
            uss = 4 * t / n2 * d2u + 2 * du / n2
            rhs = (us * us / u - us / s + 4 / s * (th0 * u * u + 1 - thinf)
                   + 4 * u ** 3 - 4 / u)
            residuals.append(abs(uss - rhs) / (1 + abs(uss)))
            a_back = -n * t / (s * u)
            a_direct = hankel_a(k, n, t, alpha, delta, prec)
            roundtrip = max(roundtrip, abs(a_back - a_direct) / (1 + abs(a_direct)))
        return UTransformReport(k=k, n=n, t_grid=ts, residuals=residuals,
                                max_residual=max(residuals),
                                roundtrip_error=+roundtrip)


@dataclass
class FirstIntegralReport:
    k: int
    n: int
    t: object
    residual: object
    ingredients: dict


def first_integral_check(k: int, n: int, t, alpha, delta, prec: int) -> FirstIntegralReport:
    """|n^2 beta - n^2 t c q + H - k(k+n)| / (1 + |n^2 beta|); rejects k = 0."""
    if k == 0:
        raise DomainError("beta_0 is not defined by the recurrence; k >= 1 required")
    params = WeightParams(n=n, t=t, alpha=alpha, delta=delta)
    with workprec(prec):
        tt = mpf(t)
        table = moment_table(params, 2 * k + 1, prec, jmin=-1)
        rt = recurrence_table(k, table)
        y = y_boundary(k, rt, table)
        der = hankel_derivatives(k, params, prec)
        n2 = mpf(n) ** 2
        lhs = n2 * rt.beta[k]
        rhs = n2 * tt * y.c_kn * y.q_kn - der.H + mpf(k) * (k + n)
        res = abs(lhs - rhs) / (1 + abs(lhs))
        return FirstIntegralReport(k=k, n=n, t=tt, residual=+res,
                                   ingredients={"beta": rt.beta[k], "c": y.c_kn,
                                                "q": y.q_kn, "H": der.H})


@dataclass
class LaxReport:
    k: int
    n: int
    t: object
    tr_a1: object
    det_a2_error: object         # |det A_-2 - s^2/4| / |s^2/4|
    phi_residuals: List[object]  # per lambda sample
    max_phi_residual: Optional[object]


def _mat_mul(A, B):
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)]
            for i in range(2)]


def _mat_scale_err(A, B):
    num = mpf(0)
    den = mpf(0)
    for i in range(2):
        for j in range(2):
            num = max(num, abs(A[i][j] - B[i][j]))
            den = max(den, abs(B[i][j]))
    return num / den if den > 0 else num


def lax_check(k: int, n: int, t, alpha, delta, prec: int,
              lambda_samples: Sequence = (), fd_h=1e-6) -> LaxReport:
    """Assemble A_{-1}, A_{-2}; optionally spot-check Phi_lambda = A Phi."""
    if k < 1:
        raise DomainError("k >= 1 required")
    params = WeightParams(n=n, t=t, alpha=alpha, delta=delta)
    p3p = P3Params(k=k, n=n)
    with workprec(prec):
        tt = mpf(t)
        if tt == 0:
            raise DomainError("t must be nonzero")
        table = moment_table(params, 2 * k + 1, prec, jmin=-1)
        rt = recurrence_table(k, table)
        y = y_boundary(k, rt, table)
        s = p3p.s_of_t(tt, prec)
        w = (n * mpc(0, 1) / s) ** (n + 2 * k)
        twopii = mpc(0, 2) * mpmath.pi
        g2k = rt.gamma2[k]
        g2km1 = rt.gamma2[k - 1]
        c = y.c_kn
        q = y.q_kn
        half_nk = mpf(n) / 2 + k
        A1 = [[half_nk, -n / (twopii * g2k) * w],
              [n * twopii * g2km1 / w, -half_nk]]
        A2s = mpc(0, 1) * s / 2
        A2 = [[A2s * (1 - 2 * c * q), A2s * (-2 * c) * w],
              [A2s * (-2 * q * (1 - c * q)) / w, A2s * (2 * c * q - 1)]]
        tr1 = A1[0][0] + A1[1][1]
        det2 = A2[0][0] * A2[1][1] - A2[0][1] * A2[1][0]
        target = s * s / 4
        det_err = abs(det2 - target) / abs(target)

        phi_res = []
        if lambda_samples:
            spec = QuadratureSpec(abs_tol=float(mpf(2) ** (-prec + 16)),
                                  rel_tol=float(mpf(2) ** (-prec + 16)))
            contour = build_contour(params, mpf(10) ** -(prec // 4), prec,
                                    jmax=2 * k)
            nn, _ = params.nt(prec)

            def cauchy(coeffs, z):
                total = mpc(0)
                for seg, label in contour.pieces:
                    cw = weight_constant(label, params, prec)

                    def f(zz, _c=cw):
                        if zz == 0:
                            return mpc(0)
                        acc = mp.zero
                        for cm in reversed(coeffs):
                            acc = acc * zz + cm
                        wgt = mpmath.exp(-nn * (zz - mpmath.log(zz) + tt / zz))
                        return _c * acc * wgt / (zz - z)

                    from .weight import _origin_spec
                    v, _e = quad_segment(f, seg, _origin_spec(spec, seg, nn, 0), prec)
                    total += v
                return total

            ck = list(rt.coeffs[k]) + [mpmath.mpmathify(1)]
            ckm1 = list(rt.coeffs[k - 1]) + [mpmath.mpmathify(1)]

            def Y_at(z):
                y11 = rt.pi_eval(k, z)
                y12 = cauchy(ck, z) / twopii
                y21 = -twopii * g2km1 * rt.pi_eval(k - 1, z)
                y22 = -g2km1 * cauchy(ckm1, z)
                return [[y11, y12], [y21, y22]]

            pref = (n * mpc(0, 1) / s) ** half_nk

            def Phi(lam):
                z = s * lam / (n * mpc(0, 1))
                Y = Y_at(z)
                e = mpmath.exp(mpc(0, 1) / 2 * (s * lam - s / lam))
                zp = z ** (mpf(n) / 2)
                left = [[pref, 0], [0, 1 / pref]]
                right = [[e * zp, 0], [0, 1 / (e * zp)]]
                return _mat_mul(_mat_mul(left, Y), right)

            h = mpf(fd_h)
            for lam in lambda_samples:
                lam = mpc(lam)
                P0 = Phi(lam)
                Pp = Phi(lam + h)
                Pm = Phi(lam - h)
                dP = [[(Pp[i][j] - Pm[i][j]) / (2 * h) for j in range(2)]
                      for i in range(2)]
                A = [[mpc(0, 1) * s / 2 + A1[0][0] / lam + A2[0][0] / lam ** 2,
                      A1[0][1] / lam + A2[0][1] / lam ** 2],
                     [A1[1][0] / lam + A2[1][0] / lam ** 2,
                      -mpc(0, 1) * s / 2 + A1[1][1] / lam + A2[1][1] / lam ** 2]]
                AP = _mat_mul(A, P0)
                phi_res.append(_mat_scale_err(dP, AP))

        return LaxReport(k=k, n=n, t=tt, tr_a1=+abs(tr1), det_a2_error=+det_err,
                         phi_residuals=phi_res,
                         max_phi_residual=max(phi_res) if phi_res else None)
