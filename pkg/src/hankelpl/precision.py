"""Working-precision plumbing.

All public computations in this package take an explicit ``prec`` (binary
digits).  Internally we scope mpmath's context with ``mp.workprec`` so callers
never depend on ambient global state; helpers here also implement the
self-validation policy: run a computation at P and 2P, count agreement digits,
and escalate (capped) when the request is not met.
"""

from __future__ import annotations

from typing import Callable

import mpmath
from mpmath import mp, mpf

from .errors import PrecisionExhausted

MIN_PREC = 128

# extra bits carried inside a workprec block beyond the caller's request
GUARD_BITS = 32


def workprec(prec: int):
    """Context manager pinning mpmath's precision to ``prec`` + guard bits."""
    return mp.workprec(int(prec) + GUARD_BITS)


def agreement_digits(a, b) -> int:
    """Decimal digits to which a and b agree, relative to their magnitude.

    Returns a large sentinel (10**6) for exact agreement.
    """
    with mp.workprec(64):
        diff = abs(mpmath.mpmathify(a) - mpmath.mpmathify(b))
        scale = max(abs(mpmath.mpmathify(a)), abs(mpmath.mpmathify(b)), mpf(10) ** -307)
        if diff == 0:
            return 10**6
        return int(mpmath.floor(-mpmath.log10(diff / scale)))


def certify(fn: Callable[[int], object], prec: int, digits: int,
            max_doublings: int = 2, cap: int = 1 << 17):
    """Evaluate ``fn(prec)`` and ``fn(2*prec)``; escalate until they agree.

    ``fn`` maps a working precision to a number (mpf/mpc).  Returns
    ``(value_at_higher_prec, agreed_digits, final_prec)`` where agreed_digits
    is the P-vs-2P agreement.  Doubles the base precision while agreement is
    below ``digits``; raises PrecisionExhausted past ``cap`` or
    ``max_doublings``.
    """
    p = max(int(prec), MIN_PREC)
    for _ in range(max_doublings + 1):
        lo = fn(p)
        hi = fn(2 * p)
        agreed = agreement_digits(lo, hi)
        if agreed >= digits:
            return hi, agreed, p
        p *= 2
        if 2 * p > cap:
            break
    raise PrecisionExhausted(
        f"no {digits}-digit agreement below precision cap {cap}",
        last_agreement=agreed, last_prec=p)


def mpf_to_json(x) -> list:
    """Exact JSON-serializable form of an mpf (sign, mantissa, exponent, bitcount)."""
    if not isinstance(x, mpf):
        x = mpmath.mpmathify(x)   # no-op for mpf; exact for int/str
    sign, man, exp, bc = x._mpf_
    return [int(sign), str(man), int(exp), int(bc)]


def mpf_from_json(v) -> mpf:
    sign, man, exp, bc = v
    # make_mpf is exact (no rounding to the ambient context)
    return mpmath.make_mpf((int(sign), int(man), int(exp), int(bc)))


def to_decimal(x, digits: int) -> str:
    """Decimal string at the given number of significant digits."""
    return mpmath.nstr(x, int(digits), strip_zeros=False)
