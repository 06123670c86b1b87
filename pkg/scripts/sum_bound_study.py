#!/usr/bin/env python3
"""Exhaustive check of min |A (+)_R B| >= p - k + 1 for functions B -> A when
|A| + |B| >= floor(2kp/(2k-1)) + 1, split by whether |B| <= |A|.

    python3 scripts/sum_bound_study.py --p 5 7 11 13 --k 2 --jobs 4
"""
import argparse

from rsumset.search import ScanSpec, scan_conjectures


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, nargs="+", default=[5, 7, 11])
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    for p in args.p:
        rep = scan_conjectures(ScanSpec("sum_bound", p=p, k=args.k), jobs=args.jobs)
        viol = [r for r in rep["rows"] if r["violation"]]
        bal = [r for r in viol if len(r["instance"]["B"]) <= len(r["instance"]["A"])]
        print(f"p={p} k={args.k}: {rep['orbits']} orbits, {len(viol)} violations, "
              f"{len(bal)} with |B|<=|A|, complete={rep['complete']}")
        for r in viol[:3]:
            print(f"   e.g. A={r['instance']['A']} B={r['instance']['B']} min={r['minValue']} bound={r['bound']}")


if __name__ == "__main__":
    main()
