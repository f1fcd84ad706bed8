"""Equilibrium measures, g/phi functions, the conformal map f and q.

Regular measure (t > t_cr): density v_t(x) = (x+c)/(2 pi x^2) sqrt((x-a)(b-x))
on [a, b], with (a, b) solving

    1 + t (a+b)/(2ab) = sqrt(ab),    (a+b)/2 - t/sqrt(ab) = 3,

c = t/sqrt(ab).  Critical constants: t_cr = -(3/4)(2^{1/3}-1)^2,
a_cr = (3 - 2^{1/3} - 2^{2/3})/2, b_cr = (3/2)(1 + 2^{1/3} + 2^{2/3}); at
t = t_cr the left edge degenerates to (x - a_cr)^{3/2} vanishing.

Signed measure (left endpoint pinned at a_cr):
psi_t(x) = (1/(2 pi x^2)) sqrt((b-x)/(x-a_cr)) (x^2 + d_1 x + d_0) with
d_0 = -t sqrt(a_cr/b), d_1 = -sqrt(a_cr/b)(1 - t/(2 a_cr) + t/(2b)) and b from
sqrt(a_cr/b)(1 - t/(2 a_cr) + t/(2b)) + (b - a_cr)/2 = 3.

g(z) = int log(z-s) psi_t(s) ds (principal arg), and the phase integrals

    phi_t(z)  = (1/2) int_{a_cr}^z (s^2+d_1 s+d_0)(s-b)^{1/2} / (s^2 (s-a_cr)^{1/2}) ds
    phi_cr(z) = (1/2) int_{a_cr}^z (s-a_cr)^{3/2} (s-b_cr)^{1/2} / s^2 ds

with arg(s - a_cr), arg(s - b) in (0, 2 pi) (cuts on (-inf, 0] and
(a_cr, inf)); phi_0 = (phi_t - phi_cr)/(t - t_cr).  The conformal map is
f(z) = ((5/4) phi_cr(z))^{2/5} on the branch with f real and negative-sloped
along the real direction at a_cr (so that f^{5/2} = -(5/4) phi_cr with
principal fractional powers), q(z) = -(t - t_cr) phi_0(z)/f(z)^{1/2}
(principal root), and the scaling variable is s*(n, t) = n^{4/5} q(a_cr).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import mpmath
from mpmath import mp, mpf, mpc

from .errors import AssertionFailed, DomainError
from .numkernel import newton_solve
from .precision import workprec


@dataclass(frozen=True)
class CriticalConstants:
    t_cr: object
    a_cr: object
    b_cr: object
    prec: int


def critical_constants(prec: int) -> CriticalConstants:
    """Closed forms of t_cr, a_cr, b_cr at working precision."""
    with workprec(prec):
        c13 = mpmath.cbrt(mpf(2))
        c23 = c13 * c13
        t_cr = -mpf(3) / 4 * (c13 - 1) ** 2
        a_cr = (3 - c13 - c23) / 2
        b_cr = mpf(3) / 2 * (1 + c13 + c23)
        return CriticalConstants(t_cr=+t_cr, a_cr=+a_cr, b_cr=+b_cr, prec=prec)


@dataclass
class EquilibriumData:
    t: object
    a: object
    b: object
    c: object
    positive: bool        # a + c >= 0 (density non-negative)
    residual: object
    l: Optional[object] = None


def solve_endpoints(t, prec: int) -> EquilibriumData:
    """Endpoints (a, b) by Newton with continuation from the t = 0 solution."""
    with workprec(prec):
        t = mpf(t)
        r2 = mpmath.sqrt(mpf(2))
        x = [3 - 2 * r2, 3 + 2 * r2]
        steps = max(1, int(mpmath.ceil(abs(t) / mpf('0.02'))))
        for i in range(1, steps + 1):
            ti = t * i / steps

            def F(v, _t=ti):
                a, b = v
                return [1 + _t * (a + b) / (2 * a * b) - mpmath.sqrt(a * b),
                        (a + b) / 2 - _t / mpmath.sqrt(a * b) - 3]

            x, _its, res = newton_solve(F, x, mpf(2) ** (-prec + 24), prec)
        a, b = x
        c = t / mpmath.sqrt(a * b)
        return EquilibriumData(t=t, a=+a, b=+b, c=+c,
                               positive=bool(a + c >= 0), residual=+res)


@dataclass
class SignedMeasureData:
    t: object
    b: object
    d0: object
    d1: object
    residual: object


def solve_signed(t, prec: int) -> SignedMeasureData:
    """Signed-measure data (b, d0, d1) by 1-d Newton from b_cr."""
    with workprec(prec):
        t = mpf(t)
        cc = critical_constants(prec)
        a_cr = cc.a_cr

        def F(v):
            b = v[0]
            return [mpmath.sqrt(a_cr / b) * (1 - t / (2 * a_cr) + t / (2 * b))
                    + (b - a_cr) / 2 - 3]

        x, _its, res = newton_solve(F, [cc.b_cr], mpf(2) ** (-prec + 24), prec)
        b = x[0]
        d0 = -t * mpmath.sqrt(a_cr / b)
        d1 = -mpmath.sqrt(a_cr / b) * (1 - t / (2 * a_cr) + t / (2 * b))
        return SignedMeasureData(t=t, b=+b, d0=+d0, d1=+d1, residual=+res)


def density(x, t, prec: int, mode: str = "signed"):
    """Pointwise density in mode regular | signed | critical; DOMAIN outside."""
    with workprec(prec):
        # mpmathify keeps an mpf argument's full precision: quadrature nodes
        # hug the endpoints far below ulp(a_cr) and must not be re-rounded
        x = mpmath.mpmathify(x)
        t = mpf(t)
        cc = critical_constants(prec)
        if mode == "regular":
            eq = solve_endpoints(t, prec)
            if not (eq.a <= x <= eq.b):
                raise DomainError(f"x = {x} outside supp [{eq.a}, {eq.b}]")
            return (x + eq.c) / (2 * mpmath.pi * x * x) * \
                mpmath.sqrt((x - eq.a) * (eq.b - x))
        if mode == "signed":
            sd = solve_signed(t, prec)
            if not (cc.a_cr <= x <= sd.b):
                raise DomainError(f"x = {x} outside supp [{cc.a_cr}, {sd.b}]")
            return (x * x + sd.d1 * x + sd.d0) / (2 * mpmath.pi * x * x) * \
                mpmath.sqrt((sd.b - x) / (x - cc.a_cr))
        if mode == "critical":
            if not (cc.a_cr <= x <= cc.b_cr):
                raise DomainError(f"x = {x} outside supp [{cc.a_cr}, {cc.b_cr}]")
            return mpmath.sqrt((x - cc.a_cr) ** 3 * (cc.b_cr - x)) / \
                (2 * mpmath.pi * x * x)
        raise ValueError(f"unknown density mode {mode!r}")


def mass(t, prec: int, mode: str = "signed"):
    """Total mass of the chosen density (tanh-sinh absorbs the endpoints)."""
    with workprec(prec):
        t = mpf(t)
        cc = critical_constants(prec)
        if mode == "regular":
            eq = solve_endpoints(t, prec)
            lo, hi = eq.a, eq.b
        elif mode == "signed":
            sd = solve_signed(t, prec)
            lo, hi = cc.a_cr, sd.b
        else:
            lo, hi = cc.a_cr, cc.b_cr

        def f(x):
            if x <= lo or x >= hi:
                return mp.zero
            return density(x, t, prec, mode)

        return mpmath.quad(f, [lo, (lo + hi) / 2, hi])


def _arg02(w, side: int = 1):
    """arg in [0, 2 pi), cut along the positive real axis; side fixes the cut."""
    im = mpmath.im(w)
    re = mpmath.re(w)
    if im > 0:
        return mpmath.arg(w)
    if im < 0:
        return mpmath.arg(w) + 2 * mpmath.pi
    if re < 0:
        return +mpmath.pi
    return mpf(0) if side > 0 else 2 * mpmath.pi


def pow02(w, expo, side: int = 1):
    """w^expo with arg w taken in [0, 2 pi)."""
    w = mpmath.mpmathify(w)
    if w == 0:
        return mpc(0)
    return mpmath.exp(expo * (mpmath.log(abs(w)) + mpc(0, 1) * _arg02(w, side)))


@dataclass
class PhiMaps:
    """Evaluators for phi_t, phi_cr, phi_0, f, q, theta and s*."""

    t: object
    prec: int
    cc: CriticalConstants
    sd: SignedMeasureData

    # -- phase integrals ---------------------------------------------------

    def _phi_generic(self, z, side: int, critical: bool):
        """(1/2) int_{a_cr}^z F(s) ds along the straight segment."""
        prec = self.prec
        with workprec(prec):
            z = mpmath.mpmathify(z)
            a_cr = self.cc.a_cr
            b = self.cc.b_cr if critical else self.sd.b
            d0, d1 = (a_cr * a_cr, -2 * a_cr) if critical else (self.sd.d0, self.sd.d1)
            dz = z - a_cr
            if dz == 0:
                return mpc(0)
            root_dz = pow02(dz, mpf(1) / 2, side)

            def f(u):
                s = a_cr + dz * u
                num = (s * s + d1 * s + d0) * pow02(s - b, mpf(1) / 2, side)
                den = s * s * mpmath.sqrt(u) * root_dz
                return num / den

            val = mpmath.quad(f, [0, mpf(1) / 4, 1])
            return val * dz / 2

    def phi_t(self, z, side: int = 1):
        return self._phi_generic(z, side, critical=False)

    def phi_cr(self, z, side: int = 1):
        return self._phi_generic(z, side, critical=True)

    def phi0(self, z, side: int = 1):
        """(phi_t - phi_cr)/(t - t_cr), the difference-quotient definition."""
        with workprec(self.prec):
            dt = mpf(self.t) - self.cc.t_cr
            return (self.phi_t(z, side) - self.phi_cr(z, side)) / dt

    def phi_plus_interval(self, x):
        """(phi_t)_+(x) = pi i int_{a_cr}^x psi_t for x in (a_cr, b)."""
        with workprec(self.prec):
            x = mpf(x)
            a_cr = self.cc.a_cr

            def f(s):
                if s <= a_cr or s >= x:
                    return mp.zero
                return density(s, self.t, self.prec, "signed")

            m = mpmath.quad(f, [a_cr, (a_cr + x) / 2, x])
            return mpc(0, 1) * mpmath.pi * m

    def re_phi_beyond_b(self, x):
        """Re phi_t(x) = (1/2) int_b^x real integrand, for x > b."""
        with workprec(self.prec):
            x = mpf(x)
            b = self.sd.b
            d0, d1 = self.sd.d0, self.sd.d1
            a_cr = self.cc.a_cr

            def f(s):
                return (s * s + d1 * s + d0) * \
                    mpmath.sqrt((s - b) * (s - a_cr)) / (s * s)

            return mpmath.quad(f, [b, (b + x) / 2, x]) / 2

    def phi_on_circle(self, theta, delta, critical: bool = True, side: int = 1):
        """phi at z = delta(1 + e^{i theta}) via [a_cr -> 2 delta] + arc path.

        Requires 2 delta <= a_cr; the real leg (2 delta, a_cr) is off both
        cuts.  Used for the monotonicity scan along Gamma_2/Gamma_3.
        """
        prec = self.prec
        with workprec(prec):
            a_cr = self.cc.a_cr
            d = mpf(delta)
            if 2 * d > a_cr + mpf(2) ** (-prec // 2):
                raise DomainError("phi_on_circle needs 2 delta <= a_cr")
            b = self.cc.b_cr if critical else self.sd.b
            d0, d1 = (a_cr * a_cr, -2 * a_cr) if critical else (self.sd.d0, self.sd.d1)

            def F(s, sd):
                if s == a_cr:
                    return mpc(0)   # integrable endpoint; measure-zero node
                num = (s * s + d1 * s + d0) * pow02(s - b, mpf(1) / 2, sd)
                return num / (s * s * pow02(s - a_cr, mpf(1) / 2, sd))

            total = mpc(0)
            if 2 * d < a_cr:
                def f1(s):
                    return F(s, -1 if mpf(theta) < 0 else 1)
                total += mpmath.quad(f1, [a_cr, 2 * d])
            th = mpf(theta)

            def f2(u):
                s = d + d * mpmath.exp(mpc(0, 1) * th * u)
                ds = d * mpc(0, 1) * th * mpmath.exp(mpc(0, 1) * th * u)
                return F(s, 1 if th >= 0 else -1) * ds

            total += mpmath.quad(f2, [0, mpf(1) / 2, mpf(15) / 16, 1])
            return total / 2

    # -- conformal map and q ----------------------------------------------

    def f_map(self, z, side: int = 1):
        """((5/4) phi_cr)^{2/5} on the branch with f ~ -(const)(z - a_cr)."""
        with workprec(self.prec):
            z = mpmath.mpmathify(z)
            w = mpf(5) / 4 * self.phi_cr(z, side)
            if w == 0:
                return mpc(0)
            target = mpf(5) / 2 * _arg02(z - self.cc.a_cr, side) + mpmath.pi / 2
            spin = mpmath.arg(w * mpmath.exp(-mpc(0, 1) * target))
            big_arg = target + spin
            return mpmath.exp(mpf(2) / 5 * (mpmath.log(abs(w))
                                            + mpc(0, 1) * (big_arg + 2 * mpmath.pi)))

    def q(self, z, side: int = 1):
        """-(t - t_cr) phi_0 / sqrt(f), principal square root."""
        with workprec(self.prec):
            dt = mpf(self.t) - self.cc.t_cr
            return -dt * self.phi0(z, side) / mpmath.sqrt(self.f_map(z, side))

    def q_at_acr(self):
        """Closed form q(a_cr) = -(2a)^{-3/5} (ab)^{-1/2} (b-a)^{2/5} (t - t_cr)."""
        with workprec(self.prec):
            a, b = self.cc.a_cr, self.cc.b_cr
            dt = mpf(self.t) - self.cc.t_cr
            return -(2 * a) ** (-mpf(3) / 5) / mpmath.sqrt(a * b) * \
                (b - a) ** (mpf(2) / 5) * dt

    def s_star(self, n: int):
        """n^{4/5} q(a_cr), the double-scaling variable."""
        with workprec(self.prec):
            return mpf(n) ** (mpf(4) / 5) * self.q_at_acr()

    @staticmethod
    def theta(zeta, s):
        """theta(zeta, s) = (4/5) zeta^{5/2} + s zeta^{1/2} (principal powers)."""
        zeta = mpmath.mpmathify(zeta)
        return mpf(4) / 5 * zeta ** (mpf(5) / 2) + s * zeta ** (mpf(1) / 2)


def phi_maps(t, prec: int) -> PhiMaps:
    with workprec(prec):
        return PhiMaps(t=mpf(t), prec=prec, cc=critical_constants(prec),
                       sd=solve_signed(t, prec))


# -- g-function and Lagrange multiplier -------------------------------------

@dataclass
class GAndL:
    t: object
    l: object
    el_spread: object        # max deviation of g_+ + g_- - V_t over samples
    samples: List[Tuple[object, object]]
    maps: PhiMaps

    def g(self, z):
        """g(z) = int log(z - s) psi_t(s) ds, arg(z - s) in (-pi, pi)."""
        with workprec(self.maps.prec):
            z = mpmath.mpmathify(z)
            cc = self.maps.cc
            sd = self.maps.sd

            def f(s):
                if s <= cc.a_cr or s >= sd.b:
                    return mp.zero
                return mpmath.log(z - s) * density(s, self.t, self.maps.prec,
                                                   "signed")

            return mpmath.quad(f, [cc.a_cr, (cc.a_cr + sd.b) / 2, sd.b])

    def g_plus_minus_sum(self, x):
        """g_+(x) + g_-(x) = 2 int log|x - s| psi_t(s) ds for x in (a_cr, b)."""
        with workprec(self.maps.prec):
            x = mpf(x)
            cc = self.maps.cc
            sd = self.maps.sd

            def f(s):
                if s <= cc.a_cr or s >= sd.b or s == x:
                    return mp.zero
                return mpmath.log(abs(x - s)) * density(s, self.t,
                                                        self.maps.prec, "signed")

            left = mpmath.quad(f, [cc.a_cr, (cc.a_cr + x) / 2, x])
            right = mpmath.quad(f, [x, (x + sd.b) / 2, sd.b])
            return 2 * (left + right)

    def variational_value(self, x):
        """2 g(x) - V_t(x) - l for real x > b (should be negative)."""
        with workprec(self.maps.prec):
            x = mpf(x)
            gx = mpmath.re(self.g(x))
            v = x - mpmath.log(x) + mpf(self.t) / x
            return 2 * gx - v - self.l


def g_and_l(t, prec: int, n_samples: int = 5) -> GAndL:
    """Lagrange multiplier from the Euler-Lagrange equality, plus its spread."""
    with workprec(prec):
        t = mpf(t)
        maps = phi_maps(t, prec)
        cc, sd = maps.cc, maps.sd
        obj = GAndL(t=t, l=mp.zero, el_spread=mp.zero, samples=[], maps=maps)
        lo, hi = cc.a_cr, sd.b
        xs = [lo + (hi - lo) * mpf(i + 1) / (n_samples + 1)
              for i in range(n_samples)]
        vals = []
        for x in xs:
            s = obj.g_plus_minus_sum(x) - (x - mpmath.log(x) + t / x)
            vals.append(s)
            obj.samples.append((x, +s))
        mid = vals[len(vals) // 2]
        obj.l = +mid
        obj.el_spread = max(abs(v - mid) for v in vals)
        return obj


# -- sign-region diagnostics -------------------------------------------------

@dataclass
class SignRegionReport:
    t: object
    rows: List[Tuple[float, float, int]]
    checks: dict
    failures: List[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def sign_region_check(t, prec: int, delta=None, grid_n: int = 12,
                      raise_on_failure: bool = False) -> SignRegionReport:
    """Grid classification of sign(Re phi_t) plus the named assertions.

    Asserts Re phi_t > 0 on sampled circle points away from a_cr, Re phi_t > 0
    past b, Re phi_t < 0 just above/below the bulk of (a_cr, b), and monotone
    growth of Re phi_cr along Gamma_2.  Report-only unless raise_on_failure.
    """
    with workprec(prec):
        t = mpf(t)
        maps = phi_maps(t, prec)
        cc, sd = maps.cc, maps.sd
        d = mpf(delta) if delta is not None else cc.a_cr / 2
        failures: List[str] = []
        checks = {}

        # circle points away from a_cr (theta away from 0)
        circle_vals = []
        for th in [mpf(p) / 8 * mpmath.pi for p in (2, 4, 6, 7)]:
            for sgn in (1, -1):
                v = maps.phi_on_circle(sgn * th, d, critical=False)
                circle_vals.append((float(sgn * th), v))
                if not mpmath.re(v) > 0:
                    failures.append(f"Re phi_t <= 0 on circle theta={float(sgn*th):.3f}")
        checks["circle_positive"] = [(thv, float(mpmath.re(v)))
                                     for thv, v in circle_vals]

        # beyond b
        for x in (sd.b + mpf(1) / 2, sd.b + 1, sd.b + 3):
            r = maps.re_phi_beyond_b(x)
            if not r > 0:
                failures.append(f"Re phi_t <= 0 at x={float(x):.4f} > b")
        checks["beyond_b_positive"] = True

        # just above/below the bulk of the band
        eps = (sd.b - cc.a_cr) / 200
        bulk = [cc.a_cr + (sd.b - cc.a_cr) * mpf(p) / 8 for p in (2, 4, 6)]
        for x in bulk:
            for sgn in (1, -1):
                v = maps.phi_t(mpc(x, sgn * eps), side=sgn)
                if not mpmath.re(v) < 0:
                    failures.append(
                        f"Re phi_t >= 0 just {'above' if sgn > 0 else 'below'} "
                        f"x={float(x):.4f}")
        checks["band_negative"] = True

        # monotone increase of Re phi_cr along Gamma_2 away from a_cr
        thetas = [mpf(p) / 16 * mpmath.pi for p in range(1, 16, 2)]
        vals = [mpmath.re(maps.phi_on_circle(th, d, critical=True))
                for th in thetas]
        mono = all(vals[i + 1] > vals[i] for i in range(len(vals) - 1))
        if not mono:
            failures.append("Re phi_cr not monotone along Gamma_2")
        checks["gamma2_monotone"] = [float(v) for v in vals]

        # grid classification, log-spaced near a_cr
        rows = []
        xs = [cc.a_cr + (sd.b - cc.a_cr) * mpf(2) ** (-e)
              for e in range(grid_n, 0, -1)] + [sd.b + k * mpf(1) / 2
                                                for k in range(1, 4)]
        ys = [mpf(2) ** (-e) for e in range(grid_n, 0, -2)]
        for x in xs:
            for y in ys:
                for sgn in (1, -1):
                    v = maps.phi_t(mpc(x, sgn * y), side=sgn)
                    rows.append((float(x), float(sgn * y),
                                 1 if mpmath.re(v) > 0 else -1))

        rep = SignRegionReport(t=t, rows=rows, checks=checks, failures=failures)
        if failures and raise_on_failure:
            raise AssertionFailed("; ".join(failures), report=rep)
        return rep
