"""Command-line surface: counts, tables, distribution scans, verification.

Exit codes: 0 success, 1 verification failure (or cache contention),
2 usage error, 3 capacity refusal.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import fcntl
import json
import math
import os
import sys
from pathlib import Path

from . import __version__, bounds, counts, dist, reference
from .counts import CapacityError
from .graph import (
    build_anti,
    build_full_coprime,
    build_gcd_k,
    build_odd_half,
)

DEFAULT_CACHE = "./coprime-census.cache.jsonl"
DEFAULT_SIEVE_LIMIT = 2 * 10**7


class UsageError(ValueError):
    pass


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


class ResultCache:
    """Append-only JSONL store of count records, exclusive while open.

    Duplicate (kind, n, aux) keys resolve last-writer-wins with a warning
    on load; contention on the advisory lock fails fast.
    """

    def __init__(self, path: Path):
        self.path = path
        self._fh = open(path, "a+", encoding="utf-8")
        try:
            fcntl.flock(self._fh.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
        except BlockingIOError:
            self._fh.close()
            raise RuntimeError(f"cache file {path} is locked by another process")
        self.records: dict[tuple, dict] = {}
        self._fh.seek(0)
        for line in self._fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            key = (rec["kind"], rec["n"], rec.get("aux"))
            if key in self.records:
                print(
                    f"warning: duplicate cache key {key}, keeping the later record",
                    file=sys.stderr,
                )
            self.records[key] = rec

    def get(self, kind: str, n: int, aux: int | None) -> dict | None:
        return self.records.get((kind, n, aux))

    def append(self, rec: dict) -> None:
        self.records[(rec["kind"], rec["n"], rec.get("aux"))] = rec
        self._fh.write(json.dumps(rec, sort_keys=True) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()


def _record(kind: str, n: int, aux: int | None, value: int, ratio: str | None) -> dict:
    return {
        "kind": kind,
        "n": n,
        "aux": aux,
        "value": str(value),
        "ratio": ratio,
        "timestamp": _now(),
        "engine_version": __version__,
    }


def _ratio_for(kind: str, n: int, value: int) -> str | None:
    if kind == "c":
        return counts.format_ratio(float_ratio(math.factorial(n), value, n))
    if kind == "c0":
        c2n = value * value
        return counts.format_ratio(float_ratio(math.factorial(2 * n), c2n, 2 * n))
    if kind == "a":
        return counts.format_ratio(float_ratio(math.factorial(n), value, n))
    return None


def float_ratio(fac: int, value: int, root: int) -> float:
    from fractions import Fraction

    return float(Fraction(fac, value)) ** (1.0 / root)


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row, sort_keys=True) + "\n")
    else:
        writer = csv.DictWriter(out, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def cmd_count(args) -> int:
    kind = args.kind
    if kind == "ck" and args.aux is None:
        raise UsageError("kind 'ck' requires --aux K")
    if args.dump_matrix:
        builders = {
            "c": lambda: build_full_coprime(args.n),
            "c0": lambda: build_odd_half(args.n),
            "a": lambda: build_anti(args.n),
            "ck": lambda: build_gcd_k(args.n, args.aux),
        }
        if kind not in builders:
            raise UsageError(f"--dump-matrix is not defined for kind {kind!r}")
        print(builders[kind]().to_text())

    cache = None
    if not args.no_cache:
        cache = ResultCache(Path(args.cache))
    try:
        cached = cache.get(kind, args.n, args.aux) if cache else None
        if cached is not None and not args.verify_cache:
            print(json.dumps(cached, sort_keys=True))
            return 0
        result = counts.compute(
            kind,
            args.n,
            args.aux,
            method=args.method,
            threads=args.threads,
            ceiling=args.ceiling,
        )
        if cached is not None and cached["value"] != str(result.value):
            print(
                f"cache mismatch for ({kind}, {args.n}, {args.aux}): "
                f"stored {cached['value']} recomputed {result.value}",
                file=sys.stderr,
            )
            return 1
        rec = _record(kind, args.n, args.aux, result.value, _ratio_for(kind, args.n, result.value))
        if cache and cached is None:
            cache.append(rec)
        print(json.dumps(rec, sort_keys=True))
        return 0
    finally:
        if cache:
            cache.close()


def _table_rows(which: str, max_n: int, threads: int, ceiling: int) -> list[dict]:
    rows = []
    if which == "t1":
        for n in range(1, max_n + 1):
            v = counts.count_c0(n, threads=threads, ceiling=ceiling)
            r = counts.format_ratio(float_ratio(math.factorial(2 * n), v * v, 2 * n))
            rows.append({"n": n, "value": str(v), "ratio": r})
    elif which == "t2":
        for n in range(1, max_n + 1, 2):
            v = counts.count_c(n, threads=threads, max_n=max(max_n, 50), ceiling=ceiling)
            r = counts.format_ratio(float_ratio(math.factorial(n), v, n))
            rows.append({"n": n, "value": str(v), "ratio": r})
    elif which == "t3":
        sieve_limit = max(max_n, 4)
        from .arith import build_sieve, is_prime

        sieve = build_sieve(sieve_limit)
        for n in range(4, max_n + 1):
            if is_prime(n, sieve):
                continue
            v = counts.count_a(n, threads=threads, ceiling=ceiling)
            r = counts.format_ratio(float_ratio(math.factorial(n), v, n))
            rows.append({"n": n, "value": str(v), "ratio": r})
    else:
        raise UsageError(f"unknown table {which!r}")
    return rows


def cmd_table(args) -> int:
    rows = _table_rows(args.which, args.max, args.threads, args.ceiling)
    _emit_rows(rows, args.format, sys.stdout)
    return 0


def cmd_dist(args) -> int:
    if 2 * args.n > args.sieve_limit:
        print(
            f"n={args.n} needs phi up to {2 * args.n} > --sieve-limit {args.sieve_limit}",
            file=sys.stderr,
        )
        return 3
    if args.second_moment:
        val = dist.second_moment(args.n)
        print(
            json.dumps(
                {"n": args.n, "second_moment": val, "ratio_to_n": val / args.n},
                sort_keys=True,
            )
        )
        return 0
    if args.top_set:
        got = dist.top_interval_set(args.n, check=False)
        expected = dist.top_interval_characterization(args.n)
        verdict = "EQUAL" if got == expected else "DIFFER"
        print(
            json.dumps(
                {"n": args.n, "size": len(got), "verdict": verdict}, sort_keys=True
            )
        )
        return 0 if verdict == "EQUAL" else 1
    alphas = args.alpha or ["0.5"]
    rows = []
    for a in alphas:
        est = dist.d_count(dist.as_fraction(a), args.n)
        rows.append(
            {"alpha": str(est.alpha), "count": est.count, "density": est.density}
        )
    _emit_rows(rows, args.format, sys.stdout)
    return 0


def _print_check(ok: bool, name: str, detail: str, warn: bool = False) -> bool:
    tag = "PASS" if ok else ("warn" if warn else "FAIL")
    print(f"{tag} {name}: {detail}")
    return ok or warn


def _verify_tables(max_n: int, threads: int, ceiling: int) -> bool:
    ok = True
    for n, (want, want_r) in reference.TABLE_C0.items():
        if n > max_n:
            continue
        got = counts.count_c0(n, threads=threads, ceiling=ceiling)
        r = float_ratio(math.factorial(2 * n), got * got, 2 * n)
        good = got == want and reference.ratio_matches(r, want_r)
        ok &= _print_check(good, f"t1 n={n}", f"C0={got} r={r:.4f}")
    for n, (want, want_r) in reference.TABLE_C_ODD.items():
        if n > max_n:
            continue
        got = counts.count_c(n, threads=threads, ceiling=ceiling)
        r = float_ratio(math.factorial(n), got, n)
        good = got == want and reference.ratio_matches(r, want_r)
        ok &= _print_check(good, f"t2 n={n}", f"C={got} r={r:.4f}")
    for n, (want, want_r) in reference.TABLE_A.items():
        if n > max_n:
            continue
        got = counts.count_a(n, threads=threads, ceiling=ceiling)
        r = float_ratio(math.factorial(n), got, n)
        good = got == want and reference.ratio_matches(r, want_r)
        ok &= _print_check(good, f"t3 n={n}", f"A={got} u={r:.4f}")
    return ok


def _verify_lemmas(max_n: int, threads: int, ceiling: int) -> bool:
    from .arith import build_sieve, is_prime

    ok = True
    top = min(max_n // 2, 12)
    for n in range(2, top + 1):
        c_even = counts.count_c(2 * n, threads=threads, ceiling=ceiling)
        c0 = counts.count_c0(n, threads=threads, ceiling=ceiling)
        ok &= _print_check(c_even == c0 * c0, f"square n={n}", "C(2n)=C0(n)^2")
        c_odd = counts.count_c(2 * n + 1, threads=threads, ceiling=ceiling)
        lo = 2 * counts.count_c0(n - 1, threads=threads, ceiling=ceiling) ** 2
        hi = counts.count_c1(n, threads=threads, ceiling=ceiling) ** 2
        ok &= _print_check(
            lo <= c_odd <= hi, f"sandwich n={n}", f"{lo} <= C(2n+1)={c_odd} <= {hi}"
        )
    for n in range(1, 7):
        ok &= _print_check(
            counts.count_ck(2 * n, 2, threads=threads) == math.factorial(n) ** 2,
            f"parity even n={n}",
            "C_2(2n) = n!^2",
        )
        ok &= _print_check(
            counts.count_ck(2 * n + 1, 2, threads=threads)
            == math.factorial(n + 1) ** 2,
            f"parity odd n={n}",
            "C_2(2n+1) = (n+1)!^2",
        )
    ok &= _print_check(counts.count_ck(6, 3) == 16, "threes n=6", "C_3(6) = 16")
    ok &= _print_check(
        counts.count_ck(12, 3) == 82944, "threes n=12", "C_3(12) = 82944"
    )
    sieve = build_sieve(20)
    for p in (3, 5, 7, 11, 13):
        ok &= _print_check(
            counts.count_a(p, threads=threads) == counts.count_a(p - 1, threads=threads),
            f"anti prime p={p}",
            "A(p) = A(p-1)",
        )
    for n in (10, 15, 20):
        ok &= _print_check(
            counts.anti_lower(n) <= counts.count_a(n, threads=threads),
            f"anti gluing n={n}",
            "anti_lower(n) <= A(n)",
        )
    # distribution spot checks at a scale that stays quick
    n = 10**5
    ok &= _print_check(
        dist.second_moment(n) < 1.78 * n, "second moment", f"sum < 1.78n at n={n}"
    )
    ok &= _print_check(
        dist.top_interval_set(n, check=False)
        == dist.top_interval_characterization(n),
        "top interval",
        f"set characterization at n={n}",
    )
    for row in dist.bracket_table().rows:
        est = dist.d_count(row.alpha, n)
        inside = (
            row.lower - dist.BRACKET_DIAGNOSTIC_TOL
            <= est.density
            <= row.upper + dist.BRACKET_DIAGNOSTIC_TOL
        )
        _print_check(
            inside,
            f"bracket alpha={row.alpha}",
            f"density {est.density:.5f} vs ({row.lower}, {row.upper}) [diagnostic]",
            warn=True,
        )
    return ok


def _verify_bounds() -> bool:
    ok = True
    dy = bounds.esum_dyadic()
    mid = bounds.esum_middle()
    tail = bounds.esum_tail()
    for rep in (dy, mid, tail, bounds.assemble_lower_bound(dy, mid, tail)):
        ok &= _print_check(
            rep.passed,
            rep.name,
            f"computed {rep.computed:.6f} {rep.relation} {rep.claimed}",
        )
    for rep in bounds.rs_bracket_check():
        ok &= _print_check(
            rep.passed,
            rep.name,
            f"computed {rep.computed:.8f} {rep.relation} {rep.claimed:.8f}",
        )
    return ok


def _verify_constants() -> bool:
    ok = True
    c3 = bounds.ck_closed(3)
    c5 = bounds.ck_closed(5)
    ok &= _print_check(int(c3 * 10**6) == 2381101, "c3", f"{c3:.9f} (prefix 2.381101)")
    ok &= _print_check(int(c5 * 10**6) == 2504521, "c5", f"{c5:.9f} (prefix 2.504521)")
    ok &= _print_check(
        abs(bounds.mcnew_product(5) - c5) < 1e-12 * c5,
        "product small",
        "mcnew_product(5) = c5 to 12 digits",
    )
    m = bounds.mcnew_product(10**7)
    ok &= _print_check(
        abs(m - 2.65044) < 1e-4, "product limit", f"mcnew_product(1e7) = {m:.6f}"
    )
    return ok


def cmd_verify(args) -> int:
    suite = args.suite
    ok = True
    if suite in ("tables", "all"):
        ok &= _verify_tables(args.max, args.threads, args.ceiling)
    if suite in ("lemmas", "all"):
        ok &= _verify_lemmas(args.max, args.threads, args.ceiling)
    if suite in ("bounds", "all"):
        ok &= _verify_bounds()
    if suite in ("constants", "all"):
        ok &= _verify_constants()
    print("verification " + ("PASSED" if ok else "FAILED"))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--threads", type=int, default=os.cpu_count() or 1, help="worker lanes"
    )
    common.add_argument(
        "--sieve-limit", type=int, default=DEFAULT_SIEVE_LIMIT, help="phi table cap"
    )
    common.add_argument(
        "--ceiling", type=int, default=40, help="permanent dimension cap"
    )
    common.add_argument("--cache", default=DEFAULT_CACHE, help="result cache path")
    common.add_argument("--no-cache", action="store_true", help="skip the cache")
    common.add_argument(
        "--verify-cache",
        action="store_true",
        help="recompute cached entries and compare",
    )
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(
        prog="coprime-census",
        description="Exact coprime-permutation counting and verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", parents=[common], help="compute one count")
    p_count.add_argument("--kind", required=True, choices=("c", "c0", "c1", "a", "ck"))
    p_count.add_argument("--n", required=True, type=int)
    p_count.add_argument("--aux", type=int, help="k for kind=ck")
    p_count.add_argument(
        "--method", choices=("auto", "permanent", "brute"), default="auto"
    )
    p_count.add_argument(
        "--dump-matrix", action="store_true", help="print the matrix before counting"
    )
    p_count.set_defaults(func=cmd_count)

    p_table = sub.add_parser("table", parents=[common], help="emit a full table")
    p_table.add_argument("--which", required=True, choices=("t1", "t2", "t3"))
    p_table.add_argument("--max", required=True, type=int)
    p_table.set_defaults(func=cmd_table)

    p_dist = sub.add_parser("dist", parents=[common], help="distribution scans")
    p_dist.add_argument("--alpha", action="append", help="cutoff (repeatable)")
    p_dist.add_argument("--n", required=True, type=int)
    p_dist.add_argument("--second-moment", action="store_true")
    p_dist.add_argument("--top-set", action="store_true")
    p_dist.set_defaults(func=cmd_dist)

    p_verify = sub.add_parser("verify", parents=[common], help="verification suites")
    p_verify.add_argument(
        "--suite",
        required=True,
        choices=("tables", "lemmas", "bounds", "constants", "all"),
    )
    p_verify.add_argument("--max", type=int, default=16, help="table verification cap")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity refusal: {exc}", file=sys.stderr)
        return 3
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
