"""Exact permanents of 0/1 matrices.

Three routes, all returning exact Python integers:

* :func:`permanent_ryser` -- Ryser's inclusion-exclusion with a Gray-code
  subset walk, optionally split across process lanes.  The workhorse.
* :func:`permanent_expand` -- recursive expansion along a minimum-popcount
  row with zero-row short-circuit, falling back to Ryser once the
  remaining block is small or dense.  Exploits forced fixed points and
  2-cycles in sparse rows.
* :func:`permanent_brute` -- direct sum over all n! permutations, the
  small-n oracle.

Arbitrary-precision integer arithmetic throughout; there is no
fixed-width fast path, so no overflow is possible.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from itertools import permutations

from .graph import BitMatrix

__all__ = [
    "CapacityError",
    "DEFAULT_CEILING",
    "permanent_ryser",
    "permanent_expand",
    "permanent_brute",
]

DEFAULT_CEILING = 40
_BRUTE_LIMIT = 10
# below this dimension, process lanes cost more than they save
_PARALLEL_MIN_DIM = 16


class CapacityError(ValueError):
    """Raised when a computation would exceed an explicit size ceiling."""


def _column_rows(rows: tuple[int, ...], n: int) -> list[list[int]]:
    return [[i for i in range(n) if (rows[i] >> j) & 1] for j in range(n)]


def _ryser_lane(cols_rows: list[list[int]], n: int, lo: int, hi: int) -> int:
    """Signed subtotal of Ryser's sum over subset ranks lo..hi-1.

    Rank k corresponds to the column subset gray(k) = k ^ (k >> 1); each
    step toggles a single column, so the n partial row sums are updated
    incrementally.  The subset parity equals k mod 2.
    """
    rs = [0] * n
    g = lo ^ (lo >> 1)
    for j in range(n):
        if (g >> j) & 1:
            for i in cols_rows[j]:
                rs[i] += 1
    mprod = math.prod
    sign = -1 if (lo & 1) else 1
    total = 0
    p = mprod(rs)
    if p:
        total = sign * p
    for k in range(lo + 1, hi):
        b = (k & -k).bit_length() - 1
        gb = 1 << b
        g ^= gb
        if g & gb:
            for i in cols_rows[b]:
                rs[i] += 1
        else:
            for i in cols_rows[b]:
                rs[i] -= 1
        sign = -sign
        p = mprod(rs)
        if p:
            total += sign * p
    return total


def _ryser_masks(rows: tuple[int, ...], n: int, threads: int) -> int:
    if n == 0:
        return 1
    if any(r == 0 for r in rows):
        return 0
    cols_rows = _column_rows(rows, n)
    size = 1 << n
    lanes = max(1, int(threads))
    if lanes == 1 or n < _PARALLEL_MIN_DIM:
        total = _ryser_lane(cols_rows, n, 0, size)
    else:
        bounds = [size * i // lanes for i in range(lanes + 1)]
        with ProcessPoolExecutor(max_workers=lanes) as pool:
            futures = [
                pool.submit(_ryser_lane, cols_rows, n, bounds[i], bounds[i + 1])
                for i in range(lanes)
            ]
            # deterministic reduction: sum in lane order
            total = sum(f.result() for f in futures)
    return total if n % 2 == 0 else -total


def permanent_ryser(
    matrix: BitMatrix, *, threads: int = 1, ceiling: int = DEFAULT_CEILING
) -> int:
    """Exact permanent via Ryser's formula with Gray-code updates.

    Cost is Theta(2^n * n); dimensions above ``ceiling`` are refused so
    the exponential cost is always an explicit caller decision.
    """
    n = matrix.n
    if n > ceiling:
        raise CapacityError(
            f"permanent dimension {n} exceeds ceiling {ceiling} (cost 2^n)"
        )
    return _ryser_masks(matrix.rows, n, threads)


class _BoundedMemo:
    """Insertion-ordered memo with LRU-style eviction."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.data: OrderedDict = OrderedDict()

    def get(self, key):
        val = self.data.get(key)
        if val is not None:
            self.data.move_to_end(key)
        return val

    def put(self, key, val):
        self.data[key] = val
        if len(self.data) > self.capacity:
            self.data.popitem(last=False)


def permanent_expand(
    matrix: BitMatrix,
    *,
    threads: int = 1,
    ryser_threshold: int = 24,
    memo_capacity: int = 1 << 17,
) -> int:
    """Exact permanent by minimum-popcount row expansion.

    Rows are eliminated in a fixed order (ascending static popcount), so
    the column-availability bitmask alone identifies a subproblem and the
    memo key is sound.  Rows with no available column short-circuit to 0;
    once the remaining block has dimension <= ``ryser_threshold`` it is
    handed to the Gray-code Ryser walk.  Equals :func:`permanent_ryser`
    on every input.
    """
    n = matrix.n
    if n == 0:
        return 1
    order = sorted(range(n), key=lambda i: matrix.rows[i].bit_count())
    rows = [matrix.rows[i] for i in order]
    full = (1 << n) - 1
    memo = _BoundedMemo(memo_capacity)

    def solve(depth: int, colmask: int) -> int:
        remaining = rows[depth:]
        dim = len(remaining)
        if dim == 0:
            return 1
        # zero-row short-circuit over every remaining row
        avail = [r & colmask for r in remaining]
        if any(a == 0 for a in avail):
            return 0
        cached = memo.get(colmask)
        if cached is not None:
            return cached
        if dim <= ryser_threshold:
            cols = [j for j in range(n) if (colmask >> j) & 1]
            remap = {j: t for t, j in enumerate(cols)}
            sub = []
            for a in avail:
                m = 0
                while a:
                    low = a & -a
                    m |= 1 << remap[low.bit_length() - 1]
                    a ^= low
                sub.append(m)
            result = _ryser_masks(tuple(sub), dim, threads)
        else:
            # branch the current row over its available columns
            a = avail[0]
            result = 0
            while a:
                low = a & -a
                result += solve(depth + 1, colmask ^ low)
                a ^= low
        memo.put(colmask, result)
        return result

    return solve(0, full)


def permanent_brute(matrix: BitMatrix) -> int:
    """Permanent as the literal sum over all n! permutations (n <= 10)."""
    n = matrix.n
    if n > _BRUTE_LIMIT:
        raise CapacityError(f"brute-force permanent limited to n <= {_BRUTE_LIMIT}")
    if n == 0:
        return 1
    rows = matrix.rows
    count = 0
    for perm in permutations(range(n)):
        for i in range(n):
            if not (rows[i] >> perm[i]) & 1:
                break
        else:
            count += 1
    return count
