"""Degrees of the zeta special polynomials z(x, -j) against floor(log_q(j+1)).

Writes CSV (j, degree, bound) and reports the first j attaining each degree.
"""

import argparse
import sys

from fqzeta.algebra import GF
from fqzeta.lseries import floor_log, zeta_degree_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--j-max", type=int, default=4095)
    ap.add_argument("--shift", type=int, default=0, help="k for b_a = a^k (0 zeta, 1 Carlitz)")
    args = ap.parse_args()

    F = GF(args.q)
    degs = zeta_degree_table(F, args.j_max, args.shift)
    print("j,degree,bound")
    first = {}
    worst = 0
    for j, d in enumerate(degs):
        bound = floor_log(j + args.shift + 1, args.q)
        print(f"{j},{d},{bound}")
        first.setdefault(d, j)
        worst = max(worst, d - bound)
    for d in sorted(first):
        print(f"# degree {d} first at j={first[d]}", file=sys.stderr)
    print(f"# max(degree - bound) = {worst}", file=sys.stderr)
    return 0 if worst <= 0 else 1


if __name__ == "__main__":
    sys.exit(main())
