"""Degree growth of partial zeta series with a fitted log envelope.

For each requested condition, writes j, degree and the bound from the coset
power-sum law, then reports the smallest C2 with degree <= log_q(j+1) + C2.
"""

import argparse
import sys

from fqzeta.algebra import GF
from fqzeta.lseries import CongruenceCondition, DirichletSeries, degree_growth_report, fit_envelope


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--j-max", type=int, default=255)
    ap.add_argument("--series", choices=("zeta", "carlitz"), default="zeta")
    ap.add_argument("--cond", action="append", default=None, help="as for the CLI; default a = 1 mod T")
    args = ap.parse_args()

    F = GF(args.q)
    L = getattr(DirichletSeries, args.series)(F)
    cond = CongruenceCondition.parse(F, args.cond or ["f=0,1;n=1;a=1"])
    rows = degree_growth_report(L, args.j_max, cond)
    print("j,degree,bound,passed")
    for r in rows:
        print(f"{r.j},{r.deg},{r.bound},{int(r.passed)}")
    c2 = fit_envelope(rows[1:], args.q)
    print(f"# fitted C2 = {c2:.3f} with C1 = 1; all rows within the law: {all(r.passed for r in rows)}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
