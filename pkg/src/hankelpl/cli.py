"""Command-line front end.

Every command writes one ReportEnvelope (JSON or CSV).  Exit codes: 0 ok,
2 warning (e.g. flagged points or failed sign assertions), 1 error (library
errors, mapped to machine-readable codes), 64 usage.
"""

from __future__ import annotations

import argparse
import sys
import time

import mpmath
from mpmath import mp, mpf, mpc

from . import equilibrium as eq
from . import orthopoly as op
from . import painleve1 as p1
from . import painleve3 as p3
from .cache import cached_moment_table
from .errors import HankelplError, UsageError
from .numkernel import QuadratureSpec
from .precision import MIN_PREC, workprec
from .reporting import ReportEnvelope, num, write_artifact
from .weight import WeightParams, moment, moment_oracle

DEFAULT_DELTA = "0.0381"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_grid(spec: str):
    """'a:b:count' or comma list -> list of value strings."""
    if ":" in spec:
        a, b, cnt = spec.split(":")
        a, b, cnt = mpf(a), mpf(b), int(cnt)
        if cnt < 2:
            return [str(a)]
        return [str(a + (b - a) * i / (cnt - 1)) for i in range(cnt)]
    return [s.strip() for s in spec.split(",") if s.strip()]


def _params(args) -> WeightParams:
    return WeightParams(n=args.n, t=args.t, alpha=mpc(complex(args.alpha)),
                        delta=args.delta)


def _digits(args) -> int:
    return args.digits or max(20, int(args.prec * 0.301) - 10)


def build_parser() -> _Parser:
    p = _Parser(prog="hankelpl", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=512,
                        help="working precision, bits (>= 128)")
    common.add_argument("--digits", type=int, default=0,
                        help="output digits (0: from prec)")
    common.add_argument("--out", default=None, help="artifact path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cache-dir", default=None,
                        help="moment cache dir (or HP_CACHE_DIR)")
    sub = p.add_subparsers(dest="command", required=True,
                           parser_class=lambda **kw: _Parser(parents=[common], **kw))

    def wparams(sp, t_default=None):
        sp.add_argument("--n", type=int, required=True)
        if t_default is None:
            sp.add_argument("--t", required=True)
        else:
            sp.add_argument("--t", default=t_default)
        sp.add_argument("--alpha", default="0.5")
        sp.add_argument("--delta", default=DEFAULT_DELTA)

    sp = sub.add_parser("moments", help="moment table mu_j")
    wparams(sp)
    sp.add_argument("--jmax", type=int, required=True)
    sp.add_argument("--jmin", type=int, default=0)
    sp.add_argument("--method", choices=("bessel", "quadrature", "auto"), default="auto")
    sp.add_argument("--oracle", action="store_true", help="include t>0 Bessel oracle column")

    sp = sub.add_parser("hankel", help="log-determinant log D_k with certificate")
    wparams(sp)
    sp.add_argument("--k", type=int, required=True)

    sp = sub.add_parser("recurrence", help="gamma^2, p, alpha, beta, a for k <= K")
    wparams(sp)
    sp.add_argument("--kmax", type=int, required=True)

    sp = sub.add_parser("identities", help="Lemma differential-identity residuals")
    wparams(sp)
    sp.add_argument("--k", type=int, required=True)

    sp = sub.add_parser("p3-verify", help="PIII: Hankel route vs ODE route")
    wparams(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--t-grid", required=True, help="'a:b:count' or comma list")
    sp.add_argument("--ode-tol", default="1e-40")

    sp = sub.add_parser("equilibrium", help="endpoints, signed data, multiplier")
    sp.add_argument("--t", required=True)
    sp.add_argument("--with-l", action="store_true")

    sp = sub.add_parser("phi-map", help="sign-region map of Re phi_t (CSV rows)")
    sp.add_argument("--t", required=True)
    sp.add_argument("--grid-n", type=int, default=8)

    sp = sub.add_parser("p1-solve", help="Painleve I from tritronquee data")
    sp.add_argument("--s-start", default="-30")
    sp.add_argument("--s-end", default="-13")
    sp.add_argument("--order", type=int, default=48)
    sp.add_argument("--samples", type=int, default=9)

    sp = sub.add_parser("ds-extract", help="double-scaling extraction at one (n, t)")
    wparams(sp, t_default="")
    sp.add_argument("--sstar", default=None, help="use t = t(s*) instead of --t")
    sp.add_argument("--l-prec", type=int, default=320)

    sp = sub.add_parser("consistency", help="Theorems 2-3 consistency over an s*-grid")
    sp.add_argument("--n-list", required=True, help="comma list, e.g. 16,32,64")
    sp.add_argument("--sstar-grid", required=True, help="'a:b:count'")
    sp.add_argument("--alpha", default="0.5")
    sp.add_argument("--delta", default=DEFAULT_DELTA)
    sp.add_argument("--l-prec", type=int, default=320)

    sp = sub.add_parser("report-all", help="standard bundle sharing the moment cache")
    wparams(sp, t_default="0.1")
    sp.add_argument("--kmax", type=int, default=3)
    return p


# -- command bodies -----------------------------------------------------------


def _cmd_moments(args, env):
    params = _params(args)
    dg = _digits(args)
    if args.method == "quadrature":
        spec = QuadratureSpec(abs_tol=float(mpf(2) ** (-args.prec + 16)),
                              rel_tol=float(mpf(2) ** (-args.prec + 16)))
        entries = []
        for j in range(args.jmin, args.jmax + 1):
            v, e = moment(j, params, spec, args.prec)
            entries.append({"j": j, **num(v, dg, err=e)})
    else:
        table = cached_moment_table(params, args.jmax, args.prec,
                                    method=args.method, jmin=args.jmin,
                                    directory=args.cache_dir)
        entries = [{"j": j, **num(table.value(j), dg, err=table.err_est(j))}
                   for j in range(args.jmin, args.jmax + 1)]
    env.payload["entries"] = entries
    if args.oracle and mpf(args.t) > 0:
        env.payload["oracle"] = [
            {"j": j, **num(moment_oracle(j, params, args.prec), dg)}
            for j in range(max(args.jmin, 0), args.jmax + 1)]


def _cmd_hankel(args, env):
    params = _params(args)
    hd = op.hankel_logdet(args.k, params, args.prec)
    env.payload["k"] = args.k
    env.payload["logD"] = num(hd.logD, _digits(args))
    env.payload["certified_digits"] = hd.certified_digits


def _cmd_recurrence(args, env):
    params = _params(args)
    dg = _digits(args)
    with workprec(args.prec):
        table = cached_moment_table(params, 2 * args.kmax + 1, args.prec,
                                    jmin=0, directory=args.cache_dir)
        rt = op.recurrence_table(args.kmax, table)
        rows = []
        for k in range(args.kmax + 1):
            row = {"k": k, "gamma2": num(rt.gamma2[k], dg),
                   "p": num(rt.p[k], dg), "alpha": num(rt.alpha[k], dg),
                   "a": num(rt.a[k], dg)}
            if k >= 1:
                row["beta"] = num(rt.beta[k], dg)
                row["orth_residual"] = num(rt.orth_residual[k], 3)
            rows.append(row)
        env.payload["rows"] = rows
        env.payload["lost_bits"] = round(rt.lost_bits, 1)


def _cmd_identities(args, env):
    rep = op.identity_suite(args.k, args.n, args.t, mpc(complex(args.alpha)),
                            args.delta, args.prec)
    env.payload.update({
        "k": args.k, "n": args.n, "t": args.t,
        "residual_a_vs_y": num(rep.r_a_vs_y, 3),
        "residual_dh_vs_y": num(rep.r_dh_vs_y, 3),
        "residual_beta_vs_h": num(rep.r_beta_vs_h, 3),
        "residual_h_vs_sum_a": num(rep.r_h_vs_suma, 3),
        "residual_p_derivative": num(rep.r_p_derivative, 3),
        "gamma2_route_agreement_digits": rep.gamma2_route_digits,
        "det_y_error": num(rep.det_y_error, 3),
    })


def _cmd_p3_verify(args, env):
    grid = _parse_grid(args.t_grid)
    rep = p3.p3_verify(args.k, args.n, grid, mpc(complex(args.alpha)),
                       args.delta, args.prec, ode_tol=mpf(args.ode_tol))
    dg = _digits(args)
    env.payload.update({
        "k": args.k, "n": args.n,
        "t_grid": [str(t) for t in rep.t_grid],
        "a_hankel": [num(v, dg) for v in rep.a_hankel],
        "a_ode": [num(v, dg) for v in rep.a_ode],
        "max_pointwise_diff": num(rep.max_pointwise, 3),
        "max_ode_residual": num(rep.max_ode_residual, 3),
    })
    ut = p3.u_transform_check(args.k, args.n, grid, mpc(complex(args.alpha)),
                              args.delta, args.prec)
    env.payload["u_transform_max_residual"] = num(ut.max_residual, 3)
    env.payload["u_roundtrip_error"] = num(ut.roundtrip_error, 3)


def _cmd_equilibrium(args, env):
    dg = _digits(args)
    cc = eq.critical_constants(args.prec)
    data = eq.solve_endpoints(args.t, args.prec)
    sd = eq.solve_signed(args.t, args.prec)
    env.payload.update({
        "t": args.t,
        "a": num(data.a, dg), "b": num(data.b, dg), "c": num(data.c, dg),
        "positive_density": data.positive,
        "endpoint_residual": num(data.residual, 3),
        "signed": {"b": num(sd.b, dg), "d0": num(sd.d0, dg),
                   "d1": num(sd.d1, dg)},
        "critical": {"t_cr": num(cc.t_cr, dg), "a_cr": num(cc.a_cr, dg),
                     "b_cr": num(cc.b_cr, dg)},
    })
    if not data.positive:
        env.warnings.append("NEGATIVE_DENSITY: a + c < 0 (t below t_cr)")
    if args.with_l:
        gl = eq.g_and_l(args.t, args.prec)
        env.payload["l"] = num(gl.l, dg)
        env.payload["el_spread"] = num(gl.el_spread, 3)


def _cmd_phi_map(args, env):
    rep = eq.sign_region_check(args.t, args.prec, grid_n=args.grid_n)
    env.payload["rows"] = [{"x": x, "y": y, "sign": s} for x, y, s in rep.rows]
    env.payload["checks"] = {k: v for k, v in rep.checks.items()}
    env.payload["failures"] = rep.failures
    if rep.failures:
        env.warnings.extend("ASSERTION_FAILED: " + f for f in rep.failures)


def _cmd_p1_solve(args, env):
    dg = _digits(args)
    sol = p1.p1_solve(args.s_start, args.s_end, args.order, args.prec)
    with workprec(args.prec):
        lo, hi = sol.grid.domain()
        samples = []
        cnt = max(2, args.samples)
        for i in range(cnt):
            s = lo + (hi - lo) * i / (cnt - 1)
            y = sol.eval(s)
            yp = sol.eval(s, derivative=1)
            samples.append({"s": num(s, dg), "y": num(y, dg),
                            "yp": num(yp, dg),
                            "H": num(sol.hamiltonian(s), dg)})
        hmax = sol.hprime_plus_y_max(
            [lo + (hi - lo) * i / 16 for i in range(1, 16)])
    env.payload.update({
        "domain": [num(lo, dg), num(hi, dg)],
        "series_tail_at_start": num(sol.series_tail_at_start, 3),
        "samples": samples,
        "max_hprime_plus_y": num(hmax, 3),
        "status": sol.grid.status,
    })
    if sol.pole_estimate is not None:
        env.payload["pole_estimate"] = num(sol.pole_estimate, dg)
        env.warnings.append("POLE_ENCOUNTERED: trajectory truncated")


def _cmd_ds_extract(args, env):
    dg = _digits(args)
    t = args.t or None
    if args.sstar is not None:
        t = p1.t_of_sstar(args.n, args.sstar, args.prec)
    if t is None:
        raise UsageError("ds-extract needs --t or --sstar")
    prec = max(args.prec, op.hankel_prec_estimate(args.n + 1, 60))
    inp = p1.finite_n_inputs(args.n, t, mpc(complex(args.alpha)), args.delta,
                             prec, l_prec=args.l_prec)
    rec = p1.extract_suite(args.n, t, inp, args.prec)
    env.precision_bits = prec
    env.payload.update({
        "n": args.n, "t": str(t), "sstar": num(rec.sstar, dg),
        "y_beta": num(rec.y_beta, dg), "y_ann": num(rec.y_ann, dg),
        "y_dh": num(rec.y_dh, dg), "h_est": num(rec.h_est, dg),
        "pole_suspect": rec.pole_suspect,
        "inputs": {"beta_nn": num(inp.beta_nn, dg), "a_nn": num(inp.a_nn, dg),
                   "gamma2_nn": num(inp.gamma2_nn, dg),
                   "dHdt": num(inp.dHdt, dg), "H": num(inp.H, dg),
                   "l": num(inp.l, dg)},
    })
    if rec.pole_suspect:
        env.warnings.append("POLE_SUSPECT: an extracted value exceeded the cap")


def _cmd_consistency(args, env):
    dg = _digits(args)
    ns = [int(s) for s in args.n_list.split(",")]
    grid = _parse_grid(args.sstar_grid)
    records = {}
    for n in ns:
        prec = op.hankel_prec_estimate(n + 1, 60)
        recs = []
        for sstar in grid:
            t = p1.t_of_sstar(n, sstar, 512)
            inp = p1.finite_n_inputs(n, t, mpc(complex(args.alpha)),
                                     args.delta, prec, l_prec=args.l_prec)
            recs.append(p1.extract_suite(n, t, inp, 512))
        records[n] = recs
    rep = p1.pi_consistency_check(records)
    payload = {"n_list": ns, "sstar_grid": [str(s) for s in grid],
               "per_n": {}}
    for n in ns:
        payload["per_n"][str(n)] = {
            "y_beta": [num(r.y_beta, dg) for r in records[n]],
            "y_ann": [num(r.y_ann, dg) for r in records[n]],
            "y_dh": [num(r.y_dh, dg) for r in records[n]],
            "h_est": [num(r.h_est, dg) for r in records[n]],
            "pole_suspect": [r.pole_suspect for r in records[n]],
            "spread_beta_ann": [num(v, 3) for v in rep.spread_beta_ann[n]],
            "spread_beta_dh": [num(v, 3) for v in rep.spread_beta_dh[n]],
            "pi_residuals": [None if v is None else num(v, 3)
                             for v in rep.pi_residuals[n]],
            "hprime_residuals": [None if v is None else num(v, 3)
                                 for v in rep.hprime_residuals[n]],
        }
    payload["trend_pairs"] = [
        {"n_lo": lo, "n_hi": hi, "shrunk": sh, "of": tot}
        for lo, hi, sh, tot in rep.trend_pairs]
    env.payload.update(payload)
    if any(any(r.pole_suspect for r in records[n]) for n in ns):
        env.warnings.append("POLE_SUSPECT: flagged points excluded from stencils")


def _cmd_report_all(args, env):
    # shares one cached moment table across the cheap commands
    args.cache_dir = args.cache_dir or ".hp_cache"
    sub = {}
    args_m = argparse.Namespace(**vars(args))
    args_m.jmax, args_m.jmin, args_m.method, args_m.oracle = 2 * args.kmax + 1, 0, "auto", False
    e = ReportEnvelope(command="moments", config={}, precision_bits=args.prec)
    _cmd_moments(args_m, e)
    sub["moments"] = e.payload
    args_h = argparse.Namespace(**vars(args))
    args_h.k = args.kmax
    e = ReportEnvelope(command="hankel", config={}, precision_bits=args.prec)
    _cmd_hankel(args_h, e)
    sub["hankel"] = e.payload
    e = ReportEnvelope(command="recurrence", config={}, precision_bits=args.prec)
    _cmd_recurrence(args_h, e)
    sub["recurrence"] = e.payload
    args_i = argparse.Namespace(**vars(args))
    args_i.k = min(2, args.kmax)
    e = ReportEnvelope(command="identities", config={}, precision_bits=args.prec)
    _cmd_identities(args_i, e)
    sub["identities"] = e.payload
    args_e = argparse.Namespace(**vars(args))
    args_e.with_l = False
    e = ReportEnvelope(command="equilibrium", config={}, precision_bits=args.prec)
    _cmd_equilibrium(args_e, e)
    sub["equilibrium"] = e.payload
    env.payload["sections"] = sub


_COMMANDS = {
    "moments": _cmd_moments,
    "hankel": _cmd_hankel,
    "recurrence": _cmd_recurrence,
    "identities": _cmd_identities,
    "p3-verify": _cmd_p3_verify,
    "equilibrium": _cmd_equilibrium,
    "phi-map": _cmd_phi_map,
    "p1-solve": _cmd_p1_solve,
    "ds-extract": _cmd_ds_extract,
    "consistency": _cmd_consistency,
    "report-all": _cmd_report_all,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.prec < MIN_PREC:
            raise UsageError(f"--prec must be >= {MIN_PREC}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64
    env = ReportEnvelope(command=args.command,
                         config={k: str(v) for k, v in sorted(vars(args).items())},
                         precision_bits=args.prec)
    t0 = time.time()
    try:
        _COMMANDS[args.command](args, env)
        env.status = "warning" if env.warnings else "ok"
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64
    except HankelplError as exc:
        env.status = "error"
        env.error = {"code": exc.code, "message": str(exc)}
    env.timing_s = time.time() - t0
    text = write_artifact(env, args.out, args.format)
    if not args.out:
        sys.stdout.write(text)
    return {"ok": 0, "warning": 2, "error": 1}[env.status]


if __name__ == "__main__":
    sys.exit(main())
