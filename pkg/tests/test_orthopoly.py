import mpmath
import pytest
from mpmath import mp, mpf, mpc

from hankelpl.errors import SingularMatrix
from hankelpl.orthopoly import (factor_hankel, hankel_derivatives, hankel_logdet,
                                identity_suite, mgf, recurrence_table, y_boundary)
from hankelpl.weight import WeightParams, moment_table

PREC = 512


def params(n=1, t='1', alpha='0.5', delta='0.0381'):
    return WeightParams(n=n, t=t, alpha=alpha, delta=delta)


@pytest.fixture(scope="module")
def tab_n1():
    return moment_table(params(), 11, PREC, jmin=-1)


class TestHankel:
    def test_logd1_is_log_mu0(self, tab_n1):
        hd = hankel_logdet(1, params(), 256)
        with mp.workprec(256):
            assert abs(hd.logD - mpmath.log(tab_n1.value(0))) < mpf('1e-70')
        assert hd.certified_digits and hd.certified_digits > 40

    def test_d2_explicit(self, tab_n1):
        hd = hankel_logdet(2, params(), 256)
        with mp.workprec(256):
            d2 = tab_n1.value(0) * tab_n1.value(2) - tab_n1.value(1) ** 2
            assert abs(mpmath.exp(hd.logD) - d2) < abs(d2) * mpf('1e-70')

    def test_d3_against_oracle_expansion(self):
        # 3x3 determinant expanded by hand from Bessel-oracle moments
        from hankelpl.weight import moment_oracle
        p = params()
        with mp.workprec(PREC):
            m = [moment_oracle(j, p, PREC) for j in range(5)]
            det = (m[0] * (m[2] * m[4] - m[3] ** 2)
                   - m[1] * (m[1] * m[4] - m[2] * m[3])
                   + m[2] * (m[1] * m[3] - m[2] ** 2))
            hd = hankel_logdet(3, p, 256)
            assert abs(mpmath.exp(hd.logD) - det) < abs(det) * mpf('1e-60')

    def test_all_minors_match_pivoted(self, tab_n1):
        fact = factor_hankel(tab_n1, 4)
        for k in (1, 2, 3, 4):
            hd = hankel_logdet(k, params(), 300, certify=False)
            with mp.workprec(300):
                assert abs(mpmath.exp(fact.logdets[k]) - mpmath.exp(hd.logD)) \
                    < abs(mpmath.exp(hd.logD)) * mpf('1e-60')

    def test_singular_detection(self):
        # duplicate-row moment table forces a zero pivot
        tab = moment_table(params(), 6, 256, jmin=0)
        tab.mu[2] = tab.mu[0]
        tab.mu[3] = tab.mu[1]
        tab.mu[4] = tab.mu[2]
        with pytest.raises(SingularMatrix):
            factor_hankel(tab, 3)


class TestRecurrence:
    def test_gamma0_alpha0(self, tab_n1):
        rt = recurrence_table(4, tab_n1)
        with mp.workprec(PREC):
            assert abs(rt.gamma2[0] - 1 / tab_n1.value(0)) < mpf('1e-100')
            assert abs(rt.alpha[0] - tab_n1.value(1) / tab_n1.value(0)) < mpf('1e-100')

    def test_beta_gamma_ratio(self, tab_n1):
        # beta_k = gamma_{k-1}^2 / gamma_k^2
        rt = recurrence_table(4, tab_n1)
        with mp.workprec(PREC):
            for k in (1, 2, 3, 4):
                assert abs(rt.beta[k] * rt.gamma2[k] / rt.gamma2[k - 1] - 1) < mpf('1e-90')

    def test_orthogonality_residuals(self, tab_n1):
        rt = recurrence_table(4, tab_n1)
        for k in (1, 2, 3, 4):
            assert rt.orth_residual[k] < mpf('1e-120')

    def test_three_term_recurrence_coefficients(self, tab_n1):
        # z pi_k - pi_{k+1} - alpha_k pi_k - beta_k pi_{k-1} == 0 coefficientwise
        rt = recurrence_table(3, tab_n1)
        with mp.workprec(PREC):
            for k in (1, 2):
                ck = rt.coeffs[k] + [mpmath.mpf(1)]
                ckp = rt.coeffs[k + 1] + [mpmath.mpf(1)]
                ckm = rt.coeffs[k - 1] + [mpmath.mpf(1)]
                # coefficients of z^m in z pi_k
                for m in range(k + 2):
                    lhs = ck[m - 1] if 0 <= m - 1 <= k else mpf(0)
                    rhs = (ckp[m] if m <= k + 1 else 0) \
                        + rt.alpha[k] * (ck[m] if m <= k else 0) \
                        + rt.beta[k] * (ckm[m] if m <= k - 1 else 0)
                    assert abs(lhs - rhs) < mpf('1e-100')

    def test_certificate(self, tab_n1):
        check = moment_table(params(), 11, PREC + 256, jmin=-1)
        rt = recurrence_table(4, tab_n1, check_table=check)
        assert rt.certified_digits > 100


class TestYBoundary:
    def test_y11_is_pi_at_zero(self, tab_n1):
        rt = recurrence_table(3, tab_n1)
        y = y_boundary(2, rt, tab_n1)
        with mp.workprec(PREC):
            assert y.Y11 == rt.pi_at_zero(2)

    def test_det_y_is_one(self, tab_n1):
        rt = recurrence_table(3, tab_n1)
        y = y_boundary(2, rt, tab_n1)
        assert abs(y.det_y0 - 1) < mpf('1e-100')

    def test_gamma2_route_independence(self, tab_n1):
        rt = recurrence_table(3, tab_n1)
        y = y_boundary(2, rt, tab_n1)
        with mp.workprec(PREC):
            assert abs(y.gamma2_from_y - rt.gamma2[2]) < abs(rt.gamma2[2]) * mpf('1e-100')

    def test_expand_vs_quad(self):
        p = params(n=2, t='0.5')
        tab = moment_table(p, 7, 320, jmin=-1)
        rt = recurrence_table(3, tab)
        y_e = y_boundary(2, rt, tab, method="expand")
        y_q = y_boundary(2, rt, tab, method="quad")
        with mp.workprec(320):
            assert abs(y_e.Y12 - y_q.Y12) < mpf('1e-60')
            assert abs(y_e.Y22 - y_q.Y22) < mpf('1e-60')
            assert abs(y_e.Yminus1_12 - y_q.Yminus1_12) < mpf('1e-55')

    def test_a0_integral(self):
        # a_0 = t gamma_0^2 int w/z dz = t mu_{-1}/mu_0
        p = params(n=2, t='0.3')
        tab = moment_table(p, 3, PREC, jmin=-1)
        rt = recurrence_table(1, tab)
        with mp.workprec(PREC):
            a0 = mpf('0.3') * tab.value(-1) / tab.value(0)
            assert abs(rt.a[0] - a0) < mpf('1e-100')


class TestDerivativesAndIdentities:
    def test_richardson_agreement(self):
        der = hankel_derivatives(2, params(n=2, t='0.2'), 384)
        assert der.agreement_digits > 25

    @pytest.mark.parametrize("k,n,t", [(1, 2, '0.1'), (2, 3, '-0.04')])
    def test_identity_suite(self, k, n, t):
        rep = identity_suite(k, n, t, '0.5', '0.0381', PREC)
        for r in (rep.r_a_vs_y, rep.r_dh_vs_y, rep.r_beta_vs_h, rep.r_h_vs_suma):
            assert r < mpf('1e-20')
        assert rep.r_p_derivative < mpf('1e-15')
        assert rep.det_y_error < mpf('1e-50')
        assert rep.gamma2_route_digits > 60


class TestMgf:
    def test_t0_is_one(self):
        v = mgf(2, '0', '0.5', '0.0381', 320)
        assert abs(v - 1) < mpf('1e-80')

    def test_in_unit_interval(self):
        v = mgf(2, '0.5', '0.5', '0.0381', 320)
        assert 0 < mpmath.re(v) < 1 and abs(mpmath.im(v)) < mpf('1e-80')

    def test_monotone_decreasing(self):
        vals = [mpmath.re(mgf(2, t, '0.5', '0.0381', 320))
                for t in ('0.1', '0.2', '0.4')]
        assert vals[0] > vals[1] > vals[2]
