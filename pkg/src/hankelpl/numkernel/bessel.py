"""Integer-order modified Bessel functions at arbitrary precision.

mpmath's generic besselk/besseli go through a limit formula for integer orders
that is prohibitively slow above ~1000 bits, so the standard power series are
implemented directly.  Orders here are moderate integers (up to a few hundred)
and arguments satisfy |z^2/4| << order^2, so the series converge after the
first few terms and suffer no catastrophic cancellation.

    I_n(z) = sum_{m>=0} (z/2)^{2m+n} / (m! (n+m)!)

    K_n(z) = (1/2) (z/2)^{-n} sum_{m=0}^{n-1} ((n-m-1)!/m!) (-z^2/4)^m
             + (-1)^{n+1} log(z/2) I_n(z)
             + (-1)^n (1/2) (z/2)^n
               sum_{m>=0} (psi(m+1) + psi(n+m+1)) / (m! (n+m)!) (z^2/4)^m

with psi(j+1) = -euler_gamma + H_j.  Arguments may be complex (the production
use is purely imaginary z); log takes the principal branch, so K_n here is the
principal-branch continuation off the positive axis.
"""

from __future__ import annotations

import mpmath
from mpmath import mp, mpf

from ..precision import workprec


def _series_tail_done(term_abs, max_abs, wp):
    return term_abs < max_abs * mpf(2) ** (-wp - 10)


def besseli_int(n: int, z, prec: int):
    """I_n(z) for integer n >= 0 at the given binary precision."""
    n = int(n)
    if n < 0:
        raise ValueError("order must be a non-negative integer")
    with workprec(prec + 64):
        z = mpmath.mpmathify(z)
        h = z / 2
        q = h * h
        # term_0 = (z/2)^n / n!
        term = h ** n / mpmath.factorial(n)
        total = term
        maxabs = abs(term)
        m = 1
        while True:
            term = term * q / (m * (n + m))
            total += term
            ta = abs(term)
            if ta > maxabs:
                maxabs = ta
            if _series_tail_done(ta, maxabs, mp.prec):
                break
            m += 1
        return +total


def besselj_int(n: int, x, prec: int):
    """J_n(x) for integer n >= 0 (alternating version of the I series)."""
    n = int(n)
    with workprec(prec + 64):
        x = mpmath.mpmathify(x)
        h = x / 2
        q = -(h * h)
        term = h ** n / mpmath.factorial(n)
        total = term
        maxabs = abs(term)
        m = 1
        while True:
            term = term * q / (m * (n + m))
            total += term
            ta = abs(term)
            if ta > maxabs:
                maxabs = ta
            if _series_tail_done(ta, maxabs, mp.prec):
                break
            m += 1
        return +total


def besselk_int(n: int, z, prec: int):
    """K_n(z) for integer n >= 0, principal branch, complex z allowed.

    For large real z the three partial sums cancel down to ~e^{-2z}; the
    cancellation is measured and the computation retried once with the lost
    bits added.
    """
    val, lost = _besselk_int_raw(n, z, prec + 64)
    if lost > 48:
        val, _ = _besselk_int_raw(n, z, prec + 64 + lost)
    return val


def _besselk_int_raw(n: int, z, prec: int):
    n = int(n)
    if n < 0:
        raise ValueError("order must be a non-negative integer")
    with workprec(prec):
        z = mpmath.mpmathify(z)
        h = z / 2
        q = h * h
        wp = mp.prec

        # finite part: (1/2)(z/2)^{-n} sum_{m<n} ((n-m-1)!/m!) (-q)^m
        finite = mp.zero
        if n > 0:
            term = mpmath.factorial(n - 1)  # m = 0
            finite = term
            for m in range(1, n):
                term = term * (-q) / (m * (n - m))
                finite += term
            finite = finite * h ** (-n) / 2

        # log part
        i_n = besseli_int(n, z, prec)
        logpart = (-1) ** (n + 1) * mpmath.log(h) * i_n

        # psi part: harmonic numbers accumulated incrementally
        euler = +mpmath.euler
        hm = mp.zero            # H_m
        hnm = sum(mpf(1) / j for j in range(1, n + 1))  # H_{n+m}
        coeff = mpf(1) / mpmath.factorial(n)            # 1/(m! (n+m)!) at m=0
        term = (hm + hnm - 2 * euler) * coeff
        psum = term
        maxabs = abs(term)
        m = 1
        qq = mp.one
        while True:
            qq = qq * q
            coeff = coeff / (m * (n + m))
            hm += mpf(1) / m
            hnm += mpf(1) / (n + m)
            term = (hm + hnm - 2 * euler) * coeff * qq
            psum += term
            ta = abs(term)
            if ta > maxabs:
                maxabs = ta
            if _series_tail_done(ta, maxabs, wp):
                break
            m += 1
        psipart = (-1) ** n * h ** n * psum / 2

        total = finite + logpart + psipart
        peak = max(abs(finite), abs(logpart), abs(psipart))
        if total == 0 or peak == 0:
            lost = 0
        else:
            lost = int(max(0, mpmath.log(peak / abs(total), 2)))
        return +total, lost
