#!/usr/bin/env python3
"""Recompute the three published tables and diff them against reference.

Typical runs:

    python scripts/reproduce_tables.py                  # quick prefix
    python scripts/reproduce_tables.py --max1 25 --max3 30   # full t1/t3
    python scripts/reproduce_tables.py --max2 49             # extended t2
"""

import argparse
import math
import os
import sys
import time
from fractions import Fraction

from coprime_census import counts, reference


def ratio(n: int, value: int) -> float:
    return float(Fraction(math.factorial(n), value)) ** (1.0 / n)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max1", type=int, default=16, help="largest n for C0(n)")
    ap.add_argument("--max2", type=int, default=25, help="largest odd n for C(n)")
    ap.add_argument("--max3", type=int, default=30, help="largest composite n for A(n)")
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()

    bad = 0
    t0 = time.time()
    print("n, C0(n), r_2n")
    for n in range(1, args.max1 + 1):
        v = counts.count_c0(n, threads=args.threads)
        r = counts.format_ratio(ratio(2 * n, v * v))
        want, want_r = reference.TABLE_C0[n]
        ok = v == want and r == want_r
        bad += not ok
        print(f"{n}, {v}, {r} {'' if ok else '  <-- differs from reference'}")

    print("\nn, C(n), r_n   (odd n)")
    for n in range(1, args.max2 + 1, 2):
        v = counts.count_c(n, threads=args.threads)
        r = counts.format_ratio(ratio(n, v))
        want, want_r = reference.TABLE_C_ODD[n]
        ok = v == want and r == want_r
        bad += not ok
        print(f"{n}, {v}, {r} {'' if ok else '  <-- differs from reference'}")

    print("\nn, A(n), u_n   (composite n)")
    for n in sorted(reference.TABLE_A):
        if n > args.max3:
            break
        v = counts.count_a(n, threads=args.threads)
        r = counts.format_ratio(ratio(n, v))
        want, want_r = reference.TABLE_A[n]
        ok = v == want and r == want_r
        bad += not ok
        print(f"{n}, {v}, {r} {'' if ok else '  <-- differs from reference'}")

    print(f"\n{bad} mismatches; {time.time() - t0:.1f}s", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
