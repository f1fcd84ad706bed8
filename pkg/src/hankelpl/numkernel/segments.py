"""Oriented path segments (lines and circular arcs) for contour quadrature.

A segment maps the parameter u in [0, 1] to a point z(u) with derivative
dz/du; quadrature integrates f(z(u)) z'(u) du.  Reversal is represented by a
flag so that a reversed segment reuses the same nodes with negated weights,
making orientation reversal negate the integral exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import mpmath
from mpmath import mpc


@dataclass(frozen=True)
class PathSegment:
    """A line (start -> end) or circular arc (center, radius, theta0 -> theta1)."""

    kind: str                      # "line" | "arc"
    start: Optional[object] = None  # line endpoints (mpc)
    end: Optional[object] = None
    center: Optional[object] = None  # arc data
    radius: Optional[object] = None
    theta0: Optional[object] = None
    theta1: Optional[object] = None
    reverse: bool = False

    def __post_init__(self):
        if self.kind == "line":
            if self.start is None or self.end is None or self.start == self.end:
                raise ValueError("line segment needs distinct endpoints")
        elif self.kind == "arc":
            if self.radius is None or not self.radius > 0:
                raise ValueError("arc needs positive radius")
            if self.theta0 == self.theta1:
                raise ValueError("arc needs a nonempty angular range")
        else:
            raise ValueError(f"unknown segment kind {self.kind!r}")

    @classmethod
    def line(cls, start, end) -> "PathSegment":
        return cls(kind="line", start=mpc(start), end=mpc(end))

    @classmethod
    def arc(cls, center, radius, theta0, theta1) -> "PathSegment":
        return cls(kind="arc", center=mpc(center), radius=mpmath.mpf(radius),
                   theta0=mpmath.mpf(theta0), theta1=mpmath.mpf(theta1))

    def point(self, u):
        """z(u) for u in [0,1] along the *unreversed* parametrization."""
        if self.kind == "line":
            return self.start + (self.end - self.start) * u
        th = self.theta0 + (self.theta1 - self.theta0) * u
        return self.center + self.radius * mpmath.exp(mpc(0, 1) * th)

    def dpoint(self, u):
        """dz/du along the unreversed parametrization."""
        if self.kind == "line":
            return self.end - self.start
        th = self.theta0 + (self.theta1 - self.theta0) * u
        return self.radius * (self.theta1 - self.theta0) * mpc(0, 1) * \
            mpmath.exp(mpc(0, 1) * th)

    def reversed(self) -> "PathSegment":
        return PathSegment(kind=self.kind, start=self.start, end=self.end,
                           center=self.center, radius=self.radius,
                           theta0=self.theta0, theta1=self.theta1,
                           reverse=not self.reverse)

    def endpoints(self):
        """(initial, final) points respecting orientation."""
        a = self.point(0)
        b = self.point(1)
        return (b, a) if self.reverse else (a, b)
