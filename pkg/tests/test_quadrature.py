import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf, mpc

from hankelpl.errors import NonconvergenceError
from hankelpl.numkernel import PathSegment, QuadratureSpec, quad_segment

PREC = 192
SPEC = QuadratureSpec(abs_tol=1e-35, rel_tol=1e-35)


def test_constant_on_unit_line():
    seg = PathSegment.line(0, 1)
    v, e = quad_segment(lambda z: mpc(1), seg, SPEC, PREC)
    assert abs(v - 1) < mpf('1e-30')


def test_one_over_z_upper_semicircle():
    # 1 -> -1 through the upper half plane: int dz/z = i pi
    with mp.workprec(PREC):
        seg = PathSegment.arc(0, 1, 0, +mpmath.pi)
        v, e = quad_segment(lambda z: 1 / z, seg, SPEC, PREC)
        assert abs(v - mpc(0, 1) * mpmath.pi) < mpf('1e-30')


def test_exponential_truncated_ray():
    # int_0^R e^{-z} dz -> 1 with truncation error e^{-R}
    with mp.workprec(PREC):
        R = mpf(120)
        seg = PathSegment.line(0, R)
        v, e = quad_segment(lambda z: mpmath.exp(-z), seg, SPEC, PREC)
        assert abs(v - (1 - mpmath.exp(-R))) < mpf('1e-30')
        assert abs(v - 1) < mpmath.exp(-R) + mpf('1e-30')


def test_reversal_negates_exactly():
    seg = PathSegment.line(0, mpc(1, 1))
    f = lambda z: mpmath.exp(z) * z
    v, _ = quad_segment(f, seg, SPEC, PREC)
    vr, _ = quad_segment(f, seg.reversed(), SPEC, PREC)
    with mp.workprec(PREC + 64):
        assert v == -vr  # same nodes, negated weights: bit-identical


def test_determinism():
    seg = PathSegment.arc(mpc(0, 0), 2, 0, 1)
    f = lambda z: mpmath.cos(z) / (1 + z * z)
    v1, e1 = quad_segment(f, seg, SPEC, PREC)
    v2, e2 = quad_segment(f, seg, SPEC, PREC)
    assert v1 == v2 and e1 == e2


def test_nonconvergence_reports_best_value():
    # integrable but nasty endpoint with depth too small to converge
    spec = QuadratureSpec(abs_tol=1e-40, rel_tol=1e-40, max_depth=1)
    seg = PathSegment.line(0, 1)
    with pytest.raises(NonconvergenceError) as exc:
        quad_segment(lambda z: mpmath.sqrt(z) * mpmath.cos(40 / (z + mpf('1e-3'))),
                     seg, spec, PREC)
    assert abs(exc.value.value) < 2  # carries a finite best value
    assert exc.value.err_est > 0


def test_singular_endpoint_hint():
    # z^{-1/2} at the start: tanh-sinh panel absorbs it
    spec = QuadratureSpec(abs_tol=1e-30, rel_tol=1e-30, singular_end="start",
                          decay_exponent=-0.5)
    seg = PathSegment.line(0, 1)
    v, e = quad_segment(lambda z: 1 / mpmath.sqrt(z) if z != 0 else mpc(0),
                        seg, spec, PREC)
    assert abs(v - 2) < mpf('1e-25')


@settings(max_examples=12, deadline=None)
@given(st.floats(min_value=0.05, max_value=0.95))
def test_additivity_under_split(u):
    # splitting a segment changes the result by less than the error estimates
    seg = PathSegment.line(0, mpc(1, '0.3'))
    f = lambda z: mpmath.exp(-z * z)
    spec = QuadratureSpec(abs_tol=1e-25, rel_tol=1e-25)
    v, e = quad_segment(f, seg, spec, PREC)
    with mp.workprec(PREC):
        zmid = seg.point(mpf(u))
    s1 = PathSegment.line(0, zmid)
    s2 = PathSegment.line(zmid, mpc(1, '0.3'))
    v1, e1 = quad_segment(f, s1, spec, PREC)
    v2, e2 = quad_segment(f, s2, spec, PREC)
    with mp.workprec(PREC + 64):
        assert abs(v - (v1 + v2)) <= e + e1 + e2 + mpf('1e-25')


@settings(max_examples=8, deadline=None)
@given(st.integers(min_value=-3, max_value=3))
def test_monomials_on_arc(k):
    # int z^k dz over a closed circle = 2 pi i [k == -1]
    with mp.workprec(PREC):
        seg = PathSegment.arc(0, mpf('1.5'), 0, 2 * (+mpmath.pi))
        v, e = quad_segment(lambda z: z ** k, seg, SPEC, PREC)
        target = mpc(0, 2) * mpmath.pi if k == -1 else mpc(0)
        assert abs(v - target) < mpf('1e-25')
