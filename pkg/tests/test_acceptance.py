"""Acceptance gate: every criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS/FAIL line per
criterion.  Criterion 9 builds moment tables up to n = 64 at ~15k bits and
dominates the runtime (tens of minutes); everything else finishes in minutes.

Criterion 7 is split: 7a collects the attainable equilibrium/phi checks; 7b is
the phi_cr local-law threshold exactly as stated, which is mathematically
unattainable (the exact subleading correction is 18.78 |z - a_cr|, i.e.
1.878e-3 at the stated radius 1e-4, above the stated 1e-3 band; see the
decisions ledger).  7b is expected to fail and is kept honest rather than
loosened.
"""

import time

import mpmath
import pytest
from mpmath import mp, mpf, mpc

from hankelpl.equilibrium import (critical_constants, g_and_l, mass, phi_maps,
                                  pow02, solve_endpoints, solve_signed)
from hankelpl.numkernel import QuadratureSpec
from hankelpl.orthopoly import hankel_prec_estimate, identity_suite
from hankelpl.painleve1 import (extract_suite, finite_n_inputs, p1_solve,
                                pi_consistency_check, t_of_sstar,
                                tritronquee_series)
from hankelpl.painleve3 import first_integral_check, p3_verify, u_transform_check
from hankelpl.weight import WeightParams, moment, moment_oracle

ALPHA = '0.5'
DELTA = '0.0381'


def report(num, ok, detail):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def test_criterion_01_critical_constants():
    t0 = time.time()
    cc = critical_constants(256)
    with mp.workprec(256):
        c13 = mpmath.cbrt(mpf(2))
        errs = [abs(cc.t_cr + mpf(3) / 4 * (c13 - 1) ** 2),
                abs(cc.a_cr - (3 - c13 - c13 * c13) / 2),
                abs(cc.b_cr - mpf(3) / 2 * (1 + c13 + c13 * c13))]
        ok = all(e < mpf(10) ** -50 for e in errs)
        approx = (abs(float(cc.t_cr) + 0.051) < 5e-4
                  and abs(float(cc.a_cr) - 0.076) < 5e-4
                  and abs(float(cc.b_cr) - 5.771) < 5e-4)
    dt = time.time() - t0
    ok = ok and approx and dt < 1.0
    assert report(1, ok, f"closed forms to 50 digits, approximations "
                         f"(-0.051, 0.076, 5.771) reproduced, {dt:.2f}s")


def test_criterion_02_endpoints_t0():
    t0 = time.time()
    eq = solve_endpoints(0, 256)
    with mp.workprec(256):
        r2 = mpmath.sqrt(mpf(2))
        err = max(abs(eq.a - (3 - 2 * r2)), abs(eq.b - (3 + 2 * r2)))
        ok = err < mpf(10) ** -30 and eq.residual < mpf(10) ** -30
    dt = time.time() - t0
    ok = ok and dt < 1.0
    assert report(2, ok, f"(3-2sqrt2, 3+2sqrt2) with residual "
                         f"{mpmath.nstr(eq.residual, 3)}, {dt:.2f}s")


def test_criterion_03_moment_oracle_equivalence():
    t0 = time.time()
    prec = 512
    spec = QuadratureSpec(abs_tol=1e-32, rel_tol=1e-32)
    worst_rel = mpf(0)
    worst_delta = mpf(0)
    ok = True
    with mp.workprec(prec):
        for n in (1, 2, 4):
            for t in ('0.5', '1'):
                vals = {}
                for delta in ('0.03', '0.0381'):
                    params = WeightParams(n=n, t=t, alpha=ALPHA, delta=delta)
                    for j in range(0, 9):
                        v, e = moment(j, params, spec, prec)
                        vals[(delta, j)] = (v, e)
                        if delta == '0.0381':
                            o = moment_oracle(j, params, prec)
                            rel = abs(v - o) / abs(o)
                            worst_rel = max(worst_rel, rel)
                            ok = ok and rel < mpf(10) ** -25
                for j in range(0, 9):
                    v1, e1 = vals[('0.03', j)]
                    v2, e2 = vals[('0.0381', j)]
                    d = abs(v1 - v2)
                    ok = ok and d <= e1 + e2
                    worst_delta = max(worst_delta, d - (e1 + e2))
    dt = time.time() - t0
    ok = ok and dt < 60
    assert report(3, ok, f"n in (1,2,4), t in (0.5,1), j<=8: worst rel diff "
                         f"{mpmath.nstr(worst_rel, 3)} (tol 1e-25), delta-independent "
                         f"within combined error, {dt:.1f}s (< 60s)")


def test_criterion_04_identity_suite():
    t0 = time.time()
    worst = mpf(0)
    ok = True
    for (k, n) in ((1, 2), (2, 3), (3, 4)):
        for t in ('0.1', '-0.04'):
            rep = identity_suite(k, n, t, ALPHA, DELTA, 512)
            for r in (rep.r_a_vs_y, rep.r_dh_vs_y, rep.r_beta_vs_h,
                      rep.r_h_vs_suma):
                worst = max(worst, r)
                ok = ok and r < mpf(10) ** -8
    dt = time.time() - t0
    ok = ok and dt < 300
    assert report(4, ok, f"all four residuals < 1e-8 over the parameter set "
                         f"(worst {mpmath.nstr(worst, 3)}), {dt:.1f}s (< 5 min)")


def test_criterion_05_piii_theorem1():
    t0 = time.time()
    grid = [str(mpf('0.05') + mpf('0.045') * i) for i in range(11)]
    ok = True
    details = []
    for (k, n) in ((1, 2), (2, 3)):
        rep = p3_verify(k, n, grid, ALPHA, DELTA, 512, ode_tol=1e-44)
        ut = u_transform_check(k, n, grid, ALPHA, DELTA, 512)
        ok = ok and rep.max_pointwise < mpf(10) ** -8
        ok = ok and ut.max_residual < mpf(10) ** -6
        details.append(f"(k,n)=({k},{n}): |a_H-a_ODE| "
                       f"{mpmath.nstr(rep.max_pointwise, 3)}, PIII(u) residual "
                       f"{mpmath.nstr(ut.max_residual, 3)}")
    dt = time.time() - t0
    ok = ok and dt < 600
    assert report(5, ok, "; ".join(details) + f", {dt:.0f}s (< 10 min)")


def test_criterion_06_first_integral():
    worst = mpf(0)
    ok = True
    for (k, n) in ((1, 2), (2, 3), (3, 4)):
        for t in ('0.1', '-0.04'):
            rep = first_integral_check(k, n, t, ALPHA, DELTA, 512)
            worst = max(worst, rep.residual)
            ok = ok and rep.residual < mpf(10) ** -8
    assert report(6, ok, f"|n^2 b - n^2 t c q + H - k(k+n)| normalized < 1e-8 "
                         f"(worst {mpmath.nstr(worst, 3)})")


def test_criterion_07a_equilibrium_phi_suite():
    t0 = time.time()
    prec = 320
    cc = critical_constants(prec)
    ok = True
    notes = []
    with mp.workprec(prec):
        for mode, t in (("signed", '-0.045'), ("regular", '-0.045'),
                        ("critical", cc.t_cr)):
            m = mass(t, prec, mode)
            ok = ok and abs(m - 1) < mpf(10) ** -20
        notes.append("masses=1 @1e-20")

        gl = g_and_l('-0.045', prec)
        ok = ok and gl.el_spread < mpf(10) ** -15
        notes.append(f"EL spread {mpmath.nstr(gl.el_spread, 2)}")
        ok = ok and gl.variational_value(gl.maps.sd.b + 1) < 0
        notes.append("2g-V-l<0 at b+1")

        sd = solve_signed(cc.t_cr, prec)
        e7 = max(abs(sd.b - cc.b_cr), abs(sd.d0 - cc.a_cr ** 2),
                 abs(sd.d1 + 2 * cc.a_cr))
        ok = ok and e7 < mpf(10) ** -20
        notes.append(f"signed@t_cr err {mpmath.nstr(e7, 2)}")

        maps = gl.maps
        n = 10
        worst_th = mpf(0)
        for ray in (mpf(1) / 4, mpf(7) / 8):
            z = cc.a_cr + mpf('1e-3') * mpmath.exp(mpc(0, 1) * mpmath.pi * ray)
            th = maps.theta(mpf(n) ** (mpf(2) / 5) * maps.f_map(z),
                            mpf(n) ** (mpf(4) / 5) * maps.q(z))
            worst_th = max(worst_th, abs(th + n * maps.phi_t(z)))
        ok = ok and worst_th < mpf(10) ** -10
        notes.append(f"theta-relation {mpmath.nstr(worst_th, 2)}")
    dt = time.time() - t0
    ok = ok and dt < 300
    assert report("7a", ok, "; ".join(notes) + f", {dt:.0f}s (< 5 min)")


def test_criterion_07b_phicr_local_law_as_stated():
    """Exactly as stated: ratio within 1e-3 of 1 at |z - a_cr| = 1e-4.

    Mathematically unattainable: phi_cr = lead * (1 + (5/7)(A'/A)(z-a_cr) + ..)
    with (5/7)|A'(0)/A(0)| = 18.78..., so |ratio - 1| = 1.878e-3 at the stated
    radius on every ray.  Kept honest; see the decisions ledger.
    """
    prec = 320
    cc = critical_constants(prec)
    maps = phi_maps('-0.045', prec)
    worst = mpf(0)
    with mp.workprec(prec):
        for ray in (mpf(1) / 4, mpf(3) / 4, mpf(3) / 2):
            side = 1 if ray <= 1 else -1
            z = cc.a_cr + mpf('1e-4') * mpmath.exp(mpc(0, 1) * mpmath.pi * ray)
            lead = mpmath.sqrt(cc.b_cr - cc.a_cr) / (5 * cc.a_cr ** 2) \
                * pow02(z - cc.a_cr, mpf(5) / 2, side) * mpc(0, 1)
            worst = max(worst, abs(maps.phi_cr(z, side) / lead - 1))
    ok = worst < mpf(10) ** -3
    assert report("7b", ok,
                  f"phi_cr local-law |ratio-1| = {mpmath.nstr(worst, 4)} at "
                  f"|z-a_cr|=1e-4 vs stated 1e-3 band (exact subleading "
                  f"correction 18.78|z-a_cr|; threshold unattainable as stated)")


def test_criterion_08_p1_engine():
    t0 = time.time()
    prec = 768
    sol30 = p1_solve('-30', '-13', 64, prec, tol=1e-62)
    sol40 = p1_solve('-40', '-13', 64, prec, tol=1e-62)
    ser = tritronquee_series(64, prec)
    with mp.workprec(prec):
        y20, tail = ser.eval(mpf(-20))
        agree = abs(sol30.eval(mpf(-20)) - y20)
        ok = agree <= tail
        samples = [mpf(-29) + mpf(i) for i in range(0, 16)]
        hres = max(sol30.hprime_plus_y_max(samples),
                   sol40.hprime_plus_y_max(samples))
        ok = ok and hres < mpf(10) ** -15
        rob = max(abs(sol40.eval(mpf(s)) - sol30.eval(mpf(s)))
                  for s in ('-25', '-20', '-15'))
        ok = ok and rob < mpf(10) ** -12
    dt = time.time() - t0
    ok = ok and dt < 60
    assert report(8, ok, f"series/ODE at -20: {mpmath.nstr(agree, 2)} <= tail "
                         f"{mpmath.nstr(tail, 2)}; |H'+y| {mpmath.nstr(hres, 2)}; "
                         f"s_start robustness {mpmath.nstr(rob, 2)}, {dt:.0f}s (< 1 min)")


@pytest.fixture(scope="module")
def ds_records():
    """Extraction records for n in (16, 32, 64) over s* in (-2, ..., 2)."""
    records = {}
    grid = [mpf(s) / 2 for s in range(-4, 5)]
    for n in (16, 32, 64):
        prec = hankel_prec_estimate(n + 1, 60)
        t_build = time.time()
        recs = []
        for sstar in grid:
            t = t_of_sstar(n, sstar, 512)
            inp = finite_n_inputs(n, t, ALPHA, DELTA, prec, l_prec=256,
                                  check_margin=1024)
            recs.append(extract_suite(n, t, inp, 512))
        records[n] = recs
        print(f"  [ds] n={n} at {prec} bits: {time.time() - t_build:.0f}s, "
              f"certified digits >= "
              f"{min(r.inputs.certified_digits for r in recs)}")
    return records


def test_criterion_09_double_scaling_consistency(ds_records):
    rep = pi_consistency_check(ds_records)
    ok = True
    with mp.workprec(192):
        # (a) cross-source spread at n=64 below 0.25*max(1, |y|), shrinking
        sp64 = rep.spread_beta_ann[64]
        sp32 = rep.spread_beta_ann[32]
        for i, r in enumerate(ds_records[64]):
            cap = mpf('0.25') * max(mpf(1), abs(r.y_beta))
            ok = ok and sp64[i] < cap
        shrunk = sum(1 for i in range(len(sp64)) if sp64[i] < sp32[i])
        ok = ok and shrunk >= 7
        # (b) PI finite-difference residual of the n=64 extraction
        worst_pi = max(v for v in rep.pi_residuals[64] if v is not None)
        ok = ok and worst_pi < mpf('0.5')
        # (c) Hamiltonian derivative identity
        worst_h = max(v for v in rep.hprime_residuals[64] if v is not None)
        ok = ok and worst_h < mpf('0.5')
        flagged = sum(1 for r in ds_records[64] if r.pole_suspect)
    assert report(9, ok,
                  f"spread(n=64) < 0.25 cap at all points, shrinks vs n=32 at "
                  f"{shrunk}/9 (need >= 7); PI residual {mpmath.nstr(worst_pi, 3)} "
                  f"< 0.5; |H'+y| {mpmath.nstr(worst_h, 3)} < 0.5; "
                  f"{flagged} flagged points")


def test_criterion_10_leading_anchors(ds_records):
    with mp.workprec(320):
        cc = critical_constants(320)
        beta_lead = (cc.b_cr - cc.a_cr) ** 2 / 16
        a_lead = cc.t_cr / mpmath.sqrt(cc.a_cr * cc.b_cr)
        # s* = 0 is the middle grid point: t = t_cr there
        mid = 4
        ratios = []
        for field_ in ("beta_nn", "a_nn"):
            lead = beta_lead if field_ == "beta_nn" else a_lead
            dev32 = abs(getattr(ds_records[32][mid].inputs, field_) - lead)
            dev64 = abs(getattr(ds_records[64][mid].inputs, field_) - lead)
            ratios.append(dev64 / dev32)
        ok = all(mpf('0.55') <= r <= mpf('0.95') for r in ratios)
        ok = ok and abs(beta_lead - mpf('2.027')) < mpf('5e-4')
        ok = ok and abs(a_lead + cc.a_cr) < mpf(10) ** -40
    assert report(10, ok,
                  f"deviation ratios n=64/n=32: beta {mpmath.nstr(ratios[0], 4)}, "
                  f"a_nn {mpmath.nstr(ratios[1], 4)} in [0.55, 0.95] "
                  f"(ideal 2^(-2/5) = 0.758); leading constants 2.027 / -a_cr")
