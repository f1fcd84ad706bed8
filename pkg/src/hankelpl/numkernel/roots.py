"""Damped Newton iteration for small dense systems."""

from __future__ import annotations

from typing import Callable, Optional, Sequence

import mpmath
from mpmath import mp, mpf

from ..errors import DivergedError, SingularJacobian
from ..precision import workprec


def _norm(v):
    return mpmath.sqrt(sum(abs(x) ** 2 for x in v))


def _fd_jacobian(F, x, fx, prec):
    m = len(x)
    h = [mpf(2) ** (-(prec // 3)) * max(mpf(1), abs(x[j])) for j in range(m)]
    cols = []
    for j in range(m):
        xp = list(x)
        xm = list(x)
        xp[j] = xp[j] + h[j]
        xm[j] = xm[j] - h[j]
        fp = F(xp)
        fm = F(xm)
        cols.append([(fp[i] - fm[i]) / (2 * h[j]) for i in range(m)])
    return [[cols[j][i] for j in range(m)] for i in range(m)]


def _solve_linear(A, b):
    m = len(b)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for k in range(m):
        piv_row = max(range(k, m), key=lambda r: abs(M[r][k]))
        if abs(M[piv_row][k]) == 0:
            raise SingularJacobian("singular Jacobian in Newton step")
        if piv_row != k:
            M[k], M[piv_row] = M[piv_row], M[k]
        piv = M[k][k]
        for r in range(k + 1, m):
            f = M[r][k] / piv
            for c in range(k, m + 1):
                M[r][c] -= f * M[k][c]
    x = [mp.zero] * m
    for k in range(m - 1, -1, -1):
        s = M[k][m] - sum(M[k][c] * x[c] for c in range(k + 1, m))
        x[k] = s / M[k][k]
    return x


def newton_solve(F: Callable[[Sequence], Sequence], x0: Sequence, tol,
                 prec: int, jacobian: Optional[Callable] = None,
                 max_iter: int = 400):
    """Solve F(x) = 0 near x0; returns (root, iterations, residual_norm).

    The Jacobian is user-supplied or built by central differences.  Simple
    backtracking damping; raises DivergedError after max_iter, and
    SingularJacobian if elimination hits a zero pivot.
    """
    with workprec(prec):
        x = [mpmath.mpmathify(v) for v in x0]
        tol = mpf(tol)
        fx = list(F(x))
        res = _norm(fx)
        floor = mpf(2) ** (-(prec + 16))
        for it in range(1, max_iter + 1):
            if res <= tol:
                return x, it - 1, +res
            J = jacobian(x) if jacobian is not None else _fd_jacobian(F, x, fx, prec)
            step = _solve_linear(J, [-v for v in fx])
            # step below the representable scale: converged to the rounding floor
            if _norm(step) <= floor * max(mpf(1), _norm(x)):
                return x, it, +res
            lam = mpf(1)
            stalled = False
            for _ in range(40):
                xn = [x[i] + lam * step[i] for i in range(len(x))]
                fn = list(F(xn))
                rn = _norm(fn)
                if rn < res or rn <= tol:
                    break
                lam /= 2
            else:
                stalled = True
            if stalled:
                if res <= mpf(2) ** (-(prec // 2)) * max(mpf(1), _norm(x)):
                    return x, it, +res
                raise DivergedError("Newton backtracking stalled",
                                    x=x, residual=+res)
            x, fx, res = xn, fn, rn
        if res <= tol:
            return x, max_iter, +res
        raise DivergedError("Newton did not converge", x=x, residual=+res)
