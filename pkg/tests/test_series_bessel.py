import mpmath
from mpmath import mp, mpf, mpc

from hankelpl.numkernel import Series, besseli_int, besselj_int, besselk_int

PREC = 256


def test_series_ring_ops():
    with mp.workprec(PREC):
        f = Series([1, 1, mpf(1) / 2, mpf(1) / 6])   # e^x
        g = f * f                                     # e^{2x}
        assert abs(g.c[3] - mpf(8) / 6) < mpf('1e-60')
        one = f / f
        assert abs(one.c[0] - 1) < mpf('1e-60')
        assert all(abs(c) < mpf('1e-60') for c in one.c[1:])


def test_series_division_scalar_and_rtruediv():
    with mp.workprec(PREC):
        t = Series([2, 1, 0, 0])
        inv = 1 / t
        # 1/(2+x) = 1/2 - x/4 + x^2/8 - ...
        assert abs(inv.c[0] - mpf(1) / 2) < mpf('1e-60')
        assert abs(inv.c[1] + mpf(1) / 4) < mpf('1e-60')
        assert abs(inv.c[2] - mpf(1) / 8) < mpf('1e-60')


def test_series_integrate_diff_eval():
    with mp.workprec(PREC):
        f = Series([0, 1, 0, 0])
        g = f.integrate()            # x^2/2
        assert abs(g.c[2] - mpf(1) / 2) < mpf('1e-60')
        assert abs(g.diff().c[1] - 1) < mpf('1e-60')
        assert abs(f(mpf('0.5')) - mpf('0.5')) < mpf('1e-60')


def test_bessel_against_mpmath_low_precision():
    cases = [(0, mpf(2)), (1, mpf('0.5')), (7, mpf(3)),
             (2, mpc(0, 2)), (33, mpc(0, 1) * 11)]
    for n, z in cases:
        with mp.workprec(PREC + 64):
            ref_i = mpmath.besseli(n, z)
            ref_k = mpmath.besselk(n, z)
        mi = besseli_int(n, z, PREC)
        mk = besselk_int(n, z, PREC)
        assert abs(mi - ref_i) <= abs(ref_i) * mpf(2) ** (-PREC + 10)
        assert abs(mk - ref_k) <= abs(ref_k) * mpf(2) ** (-PREC + 10)


def test_besselj_real():
    with mp.workprec(PREC + 64):
        ref = mpmath.besselj(5, mpf('2.5'))
    v = besselj_int(5, mpf('2.5'), PREC)
    assert abs(v - ref) <= abs(ref) * mpf(2) ** (-PREC + 10)


def test_bessel_k_recurrence():
    # K_{nu+1}(x) = K_{nu-1}(x) + (2 nu / x) K_nu(x)
    with mp.workprec(PREC):
        x = mpf('3.7')
        k4 = besselk_int(4, x, PREC)
        k5 = besselk_int(5, x, PREC)
        k6 = besselk_int(6, x, PREC)
        assert abs(k6 - (k4 + 10 / x * k5)) < abs(k6) * mpf('1e-70')
