import mpmath
import pytest
from mpmath import mp, mpf

from hankelpl.errors import EvaluationFailed
from hankelpl.numkernel import finite_diff, newton_solve

PREC = 256


def test_sqrt2():
    root, its, res = newton_solve(lambda x: [x[0] * x[0] - 2], [mpf(1)],
                                  1e-60, PREC)
    with mp.workprec(PREC):
        assert abs(root[0] - mpmath.sqrt(2)) < mpf('1e-55')


def test_linear_2x2_single_step():
    # analytic Jacobian supplied: one Newton step solves a linear system
    A = [[mpf(2), mpf(1)], [mpf(1), mpf(3)]]
    b = [mpf(5), mpf(10)]

    def F(x):
        return [A[0][0] * x[0] + A[0][1] * x[1] - b[0],
                A[1][0] * x[0] + A[1][1] * x[1] - b[1]]

    root, its, res = newton_solve(F, [mpf(0), mpf(0)], 1e-50, PREC,
                                  jacobian=lambda x: A)
    assert its <= 2
    assert res < mpf('1e-50')


def test_endpoint_system_t0():
    # 1 + 0 = sqrt(ab); (a+b)/2 = 3 -> ab = 1, a+b = 6
    def F(v):
        a, b = v
        return [1 - mpmath.sqrt(a * b), (a + b) / 2 - 3]

    root, _its, _res = newton_solve(F, [mpf('0.2'), mpf('5.5')], 1e-55, PREC)
    with mp.workprec(PREC):
        r2 = mpmath.sqrt(mpf(2))
        assert abs(root[0] - (3 - 2 * r2)) < mpf('1e-50')
        assert abs(root[1] - (3 + 2 * r2)) < mpf('1e-50')


def test_fd_first_derivative():
    v, e = finite_diff(lambda x: x * x, mpf(1), 1, PREC)
    assert abs(v - 2) < mpf('1e-40')


def test_fd_odd_function_second_derivative():
    v, e = finite_diff(mpmath.sin, mpf(0), 2, PREC)
    assert abs(v) < mpf('1e-35')


def test_fd_exponential_with_estimate():
    v, e = finite_diff(mpmath.exp, mpf(1), 1, PREC)
    with mp.workprec(PREC):
        assert abs(v - mpmath.e) <= max(e * 10, mpf('1e-35'))


def test_fd_propagates_failures():
    def bad(x):
        raise ValueError("boom")

    with pytest.raises(EvaluationFailed):
        finite_diff(bad, mpf(1), 1, PREC)
