"""Truncated power series over mpmath numbers.

Minimal calculus needed by the Taylor ODE stepper and the series launches:
ring operations, division, integration, differentiation and Horner evaluation.
A Series holds coefficients [c0, c1, ...] of sum c_k x^k; binary operations
truncate to the shorter operand's order, so precision bookkeeping stays with
the caller.  Arithmetic is duck-typed: right-hand sides written with +,*,/
work unchanged on numbers and Series.
"""

from __future__ import annotations

import mpmath
from mpmath import mp


class Series:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = [mpmath.mpmathify(x) for x in coeffs]
        if not self.c:
            self.c = [mp.zero]

    @classmethod
    def variable(cls, x0, order):
        """The series of x about x0: x0 + 1*(x - x0), padded to order."""
        c = [mpmath.mpmathify(x0), mp.one] + [mp.zero] * max(0, order - 1)
        return cls(c[:order + 1])

    @property
    def order(self):
        return len(self.c) - 1

    def truncate(self, order):
        return Series(self.c[:order + 1])

    def pad(self, order):
        if self.order >= order:
            return self
        return Series(self.c + [mp.zero] * (order - self.order))

    def __add__(self, other):
        if isinstance(other, Series):
            n = min(len(self.c), len(other.c))
            return Series([self.c[i] + other.c[i] for i in range(n)])
        c = list(self.c)
        c[0] = c[0] + other
        return Series(c)

    __radd__ = __add__

    def __neg__(self):
        return Series([-x for x in self.c])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Series) else -mpmath.mpmathify(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Series):
            n = min(len(self.c), len(other.c))
            a, b = self.c, other.c
            out = []
            for k in range(n):
                s = mp.zero
                for i in range(k + 1):
                    s += a[i] * b[k - i]
                out.append(s)
            return Series(out)
        return Series([x * other for x in self.c])

    __rmul__ = __mul__

    def reciprocal(self):
        a = self.c
        if a[0] == 0:
            raise ZeroDivisionError("series reciprocal with zero constant term")
        n = len(a)
        b = [mp.zero] * n
        b[0] = 1 / a[0]
        for k in range(1, n):
            s = mp.zero
            for i in range(1, k + 1):
                s += a[i] * b[k - i]
            b[k] = -s / a[0]
        return Series(b)

    def __truediv__(self, other):
        if isinstance(other, Series):
            n = min(len(self.c), len(other.c))
            return self.truncate(n - 1) * other.truncate(n - 1).reciprocal()
        return Series([x / other for x in self.c])

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = Series([mp.one] + [mp.zero] * self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def integrate(self, const=0):
        """Antiderivative with constant term const; order grows by one."""
        out = [mpmath.mpmathify(const)]
        for k, x in enumerate(self.c):
            out.append(x / (k + 1))
        return Series(out)

    def diff(self):
        if len(self.c) == 1:
            return Series([mp.zero])
        return Series([k * self.c[k] for k in range(1, len(self.c))])

    def __call__(self, x):
        acc = mp.zero
        for ck in reversed(self.c):
            acc = acc * x + ck
        return acc

    def __repr__(self):
        return f"Series({[mpmath.nstr(x, 6) for x in self.c]})"
