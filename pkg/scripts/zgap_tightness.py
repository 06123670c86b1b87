#!/usr/bin/env python3
"""Compare the Z gap construction with the exact minimum on its own (A, B).

For each (n, D) prints the predicted value, the value of the constructed
relation, its maximum degree on B, and the true minimum under degree <= D on B.

    python3 scripts/zgap_tightness.py --D 1 2 3 4 --n-max 14
"""
import argparse
import time

from rsumset.constructions import construct_z_gap
from rsumset.core import RelationConstraint
from rsumset.search import min_restricted_sumset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--D", type=int, nargs="+", default=[1, 2, 3, 4])
    ap.add_argument("--n-max", type=int, default=14)
    ap.add_argument("--budget", type=int, default=2_000_000)
    args = ap.parse_args()

    print(f"{'n':>3} {'D':>2} {'pred':>5} {'constr':>6} {'degB':>4} {'exact':>5} {'status':>8}")
    for D in args.D:
        for n in range(max(2 * D, (5 * D) // 2), args.n_max + 1):
            out = construct_z_gap(n, D)
            t0 = time.time()
            res = min_restricted_sumset(out.A, out.B, RelationConstraint.degree_on_b(D), args.budget)
            status = "optimal" if res.optimal else "budget"
            print(f"{n:>3} {D:>2} {out.predicted_value:>5} {len(out.evaluate()):>6} "
                  f"{out.audit['maxDegB']:>4} {res.min_value:>5} {status:>8}  ({time.time() - t0:.2f}s)")


if __name__ == "__main__":
    main()
