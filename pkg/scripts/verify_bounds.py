#!/usr/bin/env python3
"""Run every bound report and print them as JSON lines plus a summary."""

import sys
import time

from coprime_census import bounds


def main() -> int:
    t0 = time.perf_counter()
    dyadic = bounds.esum_dyadic()
    middle = bounds.esum_middle()
    tail = bounds.esum_tail()
    reports = [
        dyadic,
        middle,
        tail,
        bounds.assemble_lower_bound(dyadic, middle, tail),
        *bounds.rs_bracket_check(),
    ]
    for rep in reports:
        print(rep.to_json())
    ok = all(r.passed for r in reports)
    print(
        f"{'all pass' if ok else 'FAILURES'} "
        f"({len(reports)} reports, {time.perf_counter() - t0:.2f}s)",
        file=sys.stderr,
    )
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
