#!/usr/bin/env python3
"""Residues missing from A + A for the symmetric matching construction.

When A + A itself misses residues outside {-2, -1, 2}, no relation can reach
p - 3; this lists those primes and the missing residues.

    python3 scripts/fpmatch_coverage.py --p-max 499
"""
import argparse

from rsumset.constructions import construct_fp_matching
from rsumset.core import is_prime, sumset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p-max", type=int, default=499)
    args = ap.parse_args()
    short = 0
    for p in range(23, args.p_max + 1):
        if not is_prime(p):
            continue
        out = construct_fp_matching(p)
        missing = sorted(set(range(p)) - set(sumset(out.A, out.A)))
        value = len(out.evaluate())
        if value != p - 3:
            short += 1
            print(f"p={p:>4} |A|={len(out.A):>3} value={value} (p-3={p - 3}) A+A misses {missing}")
    print(f"{short} primes below {args.p_max} fall short of p-3")


if __name__ == "__main__":
    main()
