"""Command line front end: ``fqzeta <family> <action> [flags]``.

Every action prints JSON or CSV on stdout.  ``--config file.json`` supplies
defaults for the shared settings (see RunConfig); explicit flags win.
``--check`` turns the invariant checked by an action into the exit code.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import bases, lseries, measures, padic, vadic
from .algebra import AdditiveSubgroup, FqPoly, power_sum_subgroup, power_sums_subgroup
from .config import RunConfig
from .series import LaurentSeries, PadicExponent, PrecisionError

SHARED = ("q", "prec", "padic_N", "level_N", "M", "n_max", "d_max", "j", "j_max", "cond", "format", "seed")


class CheckFailed(Exception):
    pass


def _emit_json(obj):
    sys.stdout.write(json.dumps(obj) + "\n")


def _emit_csv(header, rows):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _laurent_list(F, text: str) -> list:
    return [LaurentSeries.parse(F, t, exact=True) for t in text.split("|")]


def _series(cfg, args, F) -> lseries.DirichletSeries:
    kind = getattr(args, "series", "zeta")
    if kind == "zeta":
        return lseries.DirichletSeries.zeta(F)
    if kind == "carlitz":
        return lseries.DirichletSeries.carlitz(F)
    if not args.table_file:
        raise ValueError("--series table needs --table-file")
    with open(args.table_file) as fh:
        return lseries.DirichletSeries.read_table(F, fh.read())


def _check(args, ok: bool, what: str):
    if getattr(args, "check", False) and not ok:
        raise CheckFailed(what)


# basis


def cmd_basis(cfg, args):
    F = cfg.field()
    B = bases.NewtonBasis(F)
    if args.table == "w":
        header = ["n", "w"] + ([f"w_{args.h}"] if args.h else [])
        rows = [[n, B.weight(n)] + ([B.weight(n, args.h)] if args.h else []) for n in range(cfg.n_max + 1)]
        _emit_csv(header, rows)
        return
    rows = []
    for n in range(cfg.n_max + 1):
        poly = B.newton_poly(n) if args.table == "p" else B.Q_poly(n)
        for k, c in enumerate(poly.coeffs):
            if c:
                rows.append([n, k, str(c)])
    _emit_csv(["n", "k", "coeff"], rows)


# measure


def _dump_measure(cfg, mu):
    if cfg.format == "csv":
        _emit_csv(["n", "coeff"], [[n, str(c)] for n, c in enumerate(mu.coeffs)])
    else:
        _emit_json({"tag": mu.tag, "coeffs": [str(c) for c in mu.coeffs]})


def cmd_measure(cfg, args):
    F = cfg.field()
    if args.action == "dirac":
        mu = measures.dirac(LaurentSeries.parse(F, args.alpha, exact=True), cfg.n_max, cfg.prec, args.tag)
        _dump_measure(cfg, mu)
    elif args.action == "divided":
        _dump_measure(cfg, measures.divided_derivative(F, args.i, cfg.n_max))
    elif args.action == "convolve":
        a = LaurentSeries.parse(F, args.alpha, exact=True)
        b = LaurentSeries.parse(F, args.beta, exact=True)
        mu = measures.convolve(measures.dirac(a, cfg.n_max, cfg.prec), measures.dirac(b, cfg.n_max, cfg.prec))
        _dump_measure(cfg, mu)
        _check(args, mu.agrees(measures.dirac(a + b, cfg.n_max, cfg.prec)), "convolution of Dirac measures")
    elif args.action == "act":
        f = _laurent_list(F, args.f)
        if args.alpha is not None:
            mu = measures.dirac(LaurentSeries.parse(F, args.alpha, exact=True), len(f) - 1, cfg.prec)
        else:
            mu = measures.divided_derivative(F, args.i, len(f) - 1)
        out = measures.act(mu, f)
        if cfg.format == "csv":
            _emit_csv(["m", "coeff"], [[m, str(c)] for m, c in enumerate(out)])
        else:
            _emit_json({"coeffs": [str(c) for c in out]})
    elif args.action == "transform":
        f = _laurent_list(F, args.f)
        z = LaurentSeries.parse(F, args.z, exact=True)
        _emit_json({"value": str(measures.transform(f, z, cfg.prec))})


# padic


def cmd_padic(cfg, args):
    p, N, D = args.p, cfg.padic_N, args.deg_D
    if args.action == "dirac":
        _emit_json({"coeffs": list(padic.dirac_series(args.a, D, p, N).coeffs)})
    elif args.action == "act":
        Fs = padic.dirac_series(args.a, D, p, N)
        f = padic.MahlerFunction(p, N, [int(x) for x in args.coeffs.split(",")])
        _emit_json({"coeffs": list(padic.act(Fs, f).coeffs)})
    elif args.action == "mahler":
        vals = [int(x) for x in args.values.split(",")]
        out = padic.values_from_mahler(vals, p, N) if args.inverse else padic.mahler_from_values(vals, p, N)
        _emit_json({"coeffs" if not args.inverse else "values": out})
    elif args.action == "eigen":
        Fs = padic.dirac_series(args.a, D, p, N)
        ok = padic.eigen_check(Fs, args.m, D, N)
        _emit_json({"m": args.m, "eigenvalue": Fs(args.m), "holds": ok})
        _check(args, ok, "eigenfunction identity")


# zeta


def cmd_zeta(cfg, args):
    F = cfg.field()
    L = _series(cfg, args, F)
    cond = lseries.CongruenceCondition.parse(F, cfg.cond) if cfg.cond else None
    if args.action == "special":
        sp = lseries.special_polynomial(L, cfg.j, cond, cfg.d_max)
        if cfg.format == "csv":
            _emit_csv(["d", "coeff"], [[d, c.dense()] for d, c in enumerate(sp.trimmed())])
        else:
            _emit_json(sp.to_json())
    elif args.action == "partial":
        direct = lseries.special_polynomial(L, cfg.j, cond, cfg.d_max)
        if args.route == "direct":
            _emit_json(direct.to_json())
            return
        res = lseries.partial_via_measure(L, cfg.j, cond, cfg.n_max)
        out = res.poly.to_json()
        out["certified"] = res.certified
        out["certificates"] = [
            {"d": c.d, "tail": None if c.tau == float("inf") else c.tau, "needed": c.needed, "certified": c.certified}
            for c in res.certificates
        ]
        out["matches_direct"] = res.poly == direct
        _emit_json(out)
        _check(args, res.certified and res.poly == direct, "measure route agreement")
    elif args.action == "growth":
        rows = lseries.degree_growth_report(L, cfg.j_max, cond, args.C1, args.C2, cfg.d_max)
        body = [[r.j, r.deg, f"{r.bound:g}", "true" if r.passed else "false"] for r in rows if r.j >= 1]
        _emit_csv(["j", "deg", "bound", "pass"], body)
        _check(args, all(r.passed for r in rows), "degree bound")
    elif args.action == "euler":
        if args.factors:
            with open(args.factors) as fh:
                factors, default = lseries.read_euler_factors(F, fh.read())
        else:
            factors, default = {}, args.default
        table = lseries.euler_expand(F, factors, args.D, default)
        keys = sorted(table, key=lambda a: a.sort_key())
        if cfg.format == "csv":
            for a in keys:
                sys.stdout.write(f"{a.dense()};{table[a].dense()}\n")
        else:
            _emit_json({"coeffs": {a.dense(): table[a].dense() for a in keys}})


# power sums


def cmd_power_sums(cfg, args):
    F = cfg.field()
    if args.action == "subgroup":
        W = AdditiveSubgroup(F, [FqPoly.parse(F, g) for g in args.gens])
        if args.i_max is not None:
            sums = power_sums_subgroup(W, args.i_max)
            _emit_csv(["i", "value"], [[i, s.dense()] for i, s in enumerate(sums)])
            lim = min(args.i_max + 1, W.order - 1)
            _check(args, all(not sums[i] for i in range(lim)), "subgroup power-sum vanishing")
        else:
            sys.stdout.write(power_sum_subgroup(W, args.i).dense() + "\n")
    elif args.action == "monic":
        L = _series(cfg, args, F)
        sys.stdout.write(lseries.power_sum(args.d, cfg.j, L).dense() + "\n")


# vadic


def cmd_vadic(cfg, args):
    F = cfg.field()
    f = FqPoly.parse(F, args.f)
    N = cfg.level_N
    if args.action == "teich":
        beta = vadic.VadicResidue.of(f, N, FqPoly.parse(F, args.beta))
        om = vadic.teichmuller(beta)
        _emit_json({"omega": om.r.dense(), "one_unit": vadic.one_unit_part(beta).r.dense()})
    elif args.action == "pow":
        beta = vadic.VadicResidue.of(f, N, FqPoly.parse(F, args.beta))
        if args.y0 is not None:
            y = vadic.SvExponent(PadicExponent.from_digits(F.p, args.y0.split(",")), args.y1, beta.Q)
        else:
            y = cfg.j
        _emit_json({"value": vadic.vadic_pow(beta, y).r.dense()})
    else:
        L = _series(cfg, args, F)
        cond = lseries.CongruenceCondition.parse(F, cfg.cond) if cfg.cond else None
        if args.action == "special":
            _emit_json(vadic.vadic_special_value(L, cfg.j, f, N, cfg.d_max, cond).to_json())
        elif args.action == "partial":
            res = vadic.vadic_vwd_and_partial(L, cfg.j, f, N, cond, cfg.d_max)
            direct = vadic.direct_restricted_sum(L, cfg.j, f, N, cond or lseries.CongruenceCondition.none(F), res.d_max)
            out = res.to_json()
            out["matches_direct"] = res == direct
            _emit_json(out)
            _check(args, res == direct, "v-adic measure route agreement")


# parser


def _shared(p: argparse.ArgumentParser):
    g = p.add_argument_group("shared settings")
    g.add_argument("--config", help="JSON file with RunConfig defaults")
    g.add_argument("--q", type=int)
    g.add_argument("--modulus", type=lambda s: [int(x) for x in s.split(",")], help="F_q modulus, ascending coefficients")
    g.add_argument("--prec", type=int, help="u-adic precision")
    g.add_argument("--n-max", dest="n_max", type=int)
    g.add_argument("--dmax", dest="d_max", type=int)
    g.add_argument("--j", type=int)
    g.add_argument("--jmax", dest="j_max", type=int)
    g.add_argument("--cond", action="append", help="congruence condition, repeatable")
    g.add_argument("--format", choices=("json", "csv"))
    g.add_argument("--seed", type=int, help="sampling seed (never changes computed values)")
    g.add_argument("--check", action="store_true", help="exit 1 if the action's invariant fails")


def _series_flags(p):
    p.add_argument("--series", choices=("zeta", "carlitz", "table"), default="zeta")
    p.add_argument("--table-file", help="lines 'poly;value' for --series table")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fqzeta", description=__doc__.splitlines()[0])
    fam = ap.add_subparsers(dest="family", required=True)

    p = fam.add_parser("basis", help="Newton polynomial and weight tables (CSV)")
    _shared(p)
    p.add_argument("--table", choices=("w", "p", "Q"), default="Q")
    p.add_argument("--h", type=int, default=None)
    p.set_defaults(func=cmd_basis, action="table")

    p = fam.add_parser("measure", help="measures on F_q[[u]]")
    acts = p.add_subparsers(dest="action", required=True)
    for name in ("dirac", "divided", "convolve", "act", "transform"):
        a = acts.add_parser(name)
        _shared(a)
        a.set_defaults(func=cmd_measure)
        if name in ("dirac", "convolve", "act"):
            a.add_argument("--alpha", required=name != "act", help="Laurent series 'v; c0,c1,...' (exact)")
        if name == "dirac":
            a.add_argument("--tag", choices=(measures.NEWTON, measures.DIGIT), default=measures.DIGIT)
        if name in ("divided", "act"):
            a.add_argument("--i", type=int, default=0)
        if name == "convolve":
            a.add_argument("--beta", required=True)
        if name in ("act", "transform"):
            a.add_argument("--f", required=True, help="digit coefficients separated by '|'")
        if name == "transform":
            a.add_argument("--z", required=True)

    p = fam.add_parser("padic", help="Mahler calculus on Z_p")
    acts = p.add_subparsers(dest="action", required=True)
    for name in ("dirac", "act", "mahler", "eigen"):
        a = acts.add_parser(name)
        _shared(a)
        a.set_defaults(func=cmd_padic)
        a.add_argument("--p", type=int, required=True)
        a.add_argument("--prec-N", dest="padic_N", type=int)
        a.add_argument("--deg-D", dest="deg_D", type=int, default=12)
        if name in ("dirac", "act", "eigen"):
            a.add_argument("--a", type=int, default=1)
        if name == "act":
            a.add_argument("--coeffs", required=True, help="Mahler coefficients, comma separated")
        if name == "mahler":
            a.add_argument("--values", required=True)
            a.add_argument("--inverse", action="store_true", help="coefficients to values")
        if name == "eigen":
            a.add_argument("--m", type=int, required=True)

    p = fam.add_parser("zeta", help="special polynomials and partial series")
    acts = p.add_subparsers(dest="action", required=True)
    for name in ("special", "partial", "growth", "euler"):
        a = acts.add_parser(name)
        _shared(a)
        _series_flags(a)
        a.set_defaults(func=cmd_zeta)
        if name == "partial":
            a.add_argument("--route", choices=("direct", "measure"), default="direct")
        if name == "growth":
            a.add_argument("--C1", type=float)
            a.add_argument("--C2", type=float)
        if name == "euler":
            a.add_argument("--factors", help="lines '<P>;<f_0> <f_1> ...' and '*;zeta|carlitz|one'")
            a.add_argument("--default", choices=("zeta", "carlitz", "one"), default="zeta")
            a.add_argument("--D", type=int, default=4)

    p = fam.add_parser("power-sums", help="power sums over subgroups and monics")
    acts = p.add_subparsers(dest="action", required=True)
    a = acts.add_parser("subgroup")
    _shared(a)
    a.add_argument("--gens", nargs="+", required=True)
    a.add_argument("--i", type=int, default=1)
    a.add_argument("--i-max", dest="i_max", type=int)
    a.set_defaults(func=cmd_power_sums)
    a = acts.add_parser("monic")
    _shared(a)
    _series_flags(a)
    a.add_argument("--d", type=int, required=True)
    a.set_defaults(func=cmd_power_sums)

    p = fam.add_parser("vadic", help="the finite place (f)")
    acts = p.add_subparsers(dest="action", required=True)
    for name in ("teich", "pow", "special", "partial"):
        a = acts.add_parser(name)
        _shared(a)
        a.set_defaults(func=cmd_vadic)
        a.add_argument("--f", required=True)
        a.add_argument("--level-N", dest="level_N", type=int)
        if name in ("teich", "pow"):
            a.add_argument("--beta", required=True)
        if name == "pow":
            a.add_argument("--y0", help="base-p digits of y_0, ascending")
            a.add_argument("--y1", type=int, default=0)
        if name in ("special", "partial"):
            _series_flags(a)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        base = None
        if args.config:
            with open(args.config) as fh:
                base = RunConfig.from_json(fh.read())
        cfg = RunConfig.merged(base, {k: getattr(args, k, None) for k in SHARED + ("modulus",)})
        args.func(cfg, args)
    except CheckFailed as exc:
        sys.stderr.write(f"check failed: {exc}\n")
        return 1
    except (ValueError, PrecisionError, ZeroDivisionError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
