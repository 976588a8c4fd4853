"""The named counting functions and their reductions.

* C(n): coprime permutations of [n].  Even n reduces to an (n/2)-square
  permanent through C(2m) = C0(m)^2; odd n = 2m+1 is assembled from the
  m+1 permanents C_(a)(m) through the coprime double sum, which is
  exponentially cheaper than one (2m+1)-square permanent.
* C0, C1, C_(a): the half-size coprime matching counts behind those
  reductions.
* A(n): anti-coprime permutations (gcd > 1 away from position 1), via the
  reduced matrix with forced fixed points removed.
* C_k(n): permutations avoiding common factors with k!.
* anti_lower(n): the gluing lower bound for A(n) built from
  smallest-prime-factor classes.

All values are exact integers and are memoized in-process by
(kind, n, aux); the persistent cache lives in the CLI layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from math import gcd

from .arith import build_sieve
from .graph import (
    build_anti,
    build_full_coprime,
    build_gcd_k,
    build_odd_half,
    build_odd_plus_excluding,
)
from .permanent import (
    DEFAULT_CEILING,
    CapacityError,
    permanent_brute,
    permanent_expand,
    permanent_ryser,
)

__all__ = [
    "CountResult",
    "DEFAULT_MAX_N",
    "count_c0",
    "count_c_a",
    "count_c1",
    "count_c",
    "count_a",
    "count_ck",
    "anti_lower",
    "ratio_r",
    "ratio_u",
    "brute_constrained_count",
    "format_ratio",
    "compute",
    "clear_cache",
]

# default cap on n for count_c; keeps the 2^(n/2) cost inside the range
# the tables actually cover (raise explicitly for more)
DEFAULT_MAX_N = 50
_BRUTE_XCHECK_MAX = 12

_memo: dict[tuple, int] = {}


def clear_cache() -> None:
    _memo.clear()


@dataclass(frozen=True)
class CountResult:
    """One computed count: which function, at which argument, via which path."""

    kind: str  # c | c0 | c1 | ca | a | ck | anti-lower
    n: int
    aux: int | None
    value: int
    method: str


def count_c0(n: int, *, threads: int = 1, ceiling: int = DEFAULT_CEILING) -> int:
    """Number of coprime matchings from the first n odd numbers into [n]."""
    key = ("c0", n)
    if key not in _memo:
        _memo[key] = permanent_ryser(
            build_odd_half(n), threads=threads, ceiling=ceiling
        )
    return _memo[key]


def count_c_a(
    n: int, a: int, *, threads: int = 1, ceiling: int = DEFAULT_CEILING
) -> int:
    """Coprime matchings between [n] and the first n+1 odd numbers minus {a}."""
    key = ("ca", n, a)
    if key not in _memo:
        _memo[key] = permanent_ryser(
            build_odd_plus_excluding(n, a), threads=threads, ceiling=ceiling
        )
    return _memo[key]


def count_c1(n: int, *, threads: int = 1, ceiling: int = DEFAULT_CEILING) -> int:
    """Sum of count_c_a(n, a) over all odd a <= 2n+1."""
    return sum(
        count_c_a(n, a, threads=threads, ceiling=ceiling)
        for a in range(1, 2 * n + 2, 2)
    )


def count_c(
    n: int,
    *,
    threads: int = 1,
    max_n: int = DEFAULT_MAX_N,
    ceiling: int = DEFAULT_CEILING,
) -> int:
    """Number of coprime permutations of [n].

    Even n: count_c0(n/2) squared.  Odd n = 2m+1: the coprime double sum
    over excluded odd values a, b.  Results for n <= 12 are cross-checked
    against the independent backtracking oracle on every call.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > max_n:
        raise CapacityError(f"count_c limited to n <= {max_n} (cost 2^(n/2))")
    key = ("c", n)
    if key not in _memo:
        if n == 1:
            value = 1  # the single permutation of {1}
        elif n % 2 == 0:
            value = count_c0(n // 2, threads=threads, ceiling=ceiling) ** 2
        else:
            m = n // 2
            odds = range(1, 2 * m + 2, 2)
            ca = {
                a: count_c_a(m, a, threads=threads, ceiling=ceiling) for a in odds
            }
            value = sum(
                ca[a] * ca[b] for a in odds for b in odds if gcd(a, b) == 1
            )
        if n <= _BRUTE_XCHECK_MAX:
            check = brute_constrained_count(n, "coprime")
            if check != value:
                raise AssertionError(
                    f"count_c({n}) reduction {value} != oracle {check}"
                )
        _memo[key] = value
    return _memo[key]


def count_a(n: int, *, threads: int = 1, ceiling: int = DEFAULT_CEILING) -> int:
    """Number of permutations of [n] with gcd(j, sigma(j)) > 1 for j >= 2.

    n = 1 is the trivial identity case; otherwise the permanent of the
    reduced matrix (forced fixed points removed) via row expansion.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    key = ("a", n)
    if key not in _memo:
        if n == 1:
            value = 1
        else:
            value = permanent_expand(build_anti(n), threads=threads)
        if n <= _BRUTE_XCHECK_MAX:
            check = brute_constrained_count(n, "anti")
            if check != value:
                raise AssertionError(
                    f"count_a({n}) reduction {value} != oracle {check}"
                )
        _memo[key] = value
    return _memo[key]


def count_ck(
    n: int, k: int, *, threads: int = 1, ceiling: int = DEFAULT_CEILING
) -> int:
    """Number of permutations of [n] with gcd(j, sigma(j), k!) = 1."""
    key = ("ck", n, k)
    if key not in _memo:
        value = permanent_ryser(build_gcd_k(n, k), threads=threads, ceiling=ceiling)
        if n <= _BRUTE_XCHECK_MAX:
            check = brute_constrained_count(n, "gcd_k", k=k)
            if check != value:
                raise AssertionError(
                    f"count_ck({n}, {k}) permanent {value} != oracle {check}"
                )
        _memo[key] = value
    return _memo[key]


def anti_lower(n: int) -> int:
    """Gluing lower bound for A(n).

    Product over primes p <= n of (#L_n(p))!, where L_n(p) collects the
    m <= n whose smallest prime factor is p.  Permuting each class
    internally keeps every pair sharing the factor p, so the product
    counts distinct anti-coprime permutations.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    sieve = build_sieve(n)
    sizes: dict[int, int] = {}
    for m in range(2, n + 1):
        p = int(sieve.spf[m])
        sizes[p] = sizes.get(p, 0) + 1
    result = 1
    for c in sizes.values():
        result *= math.factorial(c)
    return result


def ratio_r(
    n: int,
    *,
    threads: int = 1,
    max_n: int = DEFAULT_MAX_N,
    ceiling: int = DEFAULT_CEILING,
) -> float:
    """(n!/C(n))^(1/n); the normalized decay rate of the coprime count."""
    value = count_c(n, threads=threads, max_n=max_n, ceiling=ceiling)
    q = float(Fraction(math.factorial(n), value))
    return q ** (1.0 / n)


def ratio_u(n: int, *, threads: int = 1, ceiling: int = DEFAULT_CEILING) -> float:
    """(n!/A(n))^(1/n); the anti-coprime analogue of ratio_r."""
    value = count_a(n, threads=threads, ceiling=ceiling)
    q = float(Fraction(math.factorial(n), value))
    return q ** (1.0 / n)


def format_ratio(x: float) -> str:
    """Render a ratio at 4 decimals, ties half-even (table convention)."""
    return str(Decimal(repr(x)).quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


def _allowed_masks(n: int, constraint: str, k: int | None) -> list[int]:
    if constraint == "coprime":
        pred = lambda j, v: gcd(j, v) == 1
    elif constraint == "anti":
        pred = lambda j, v: j == 1 or gcd(j, v) > 1
    elif constraint == "gcd_k":
        if k is None or k < 2:
            raise ValueError("gcd_k constraint needs k >= 2")
        kp = [p for p in range(2, k + 1) if all(p % q for q in range(2, p))]
        pred = lambda j, v: all(gcd(j, v) % p for p in kp)
    else:
        raise ValueError(f"unknown constraint {constraint!r}")
    # bit v-1 of masks[j] set iff sigma(j) = v is allowed
    masks = [0] * (n + 1)
    for j in range(1, n + 1):
        m = 0
        for v in range(1, n + 1):
            if pred(j, v):
                m |= 1 << (v - 1)
        masks[j] = m
    return masks


def brute_constrained_count(
    n: int, constraint: str, *, k: int | None = None
) -> int:
    """Count permutations satisfying a positional constraint by backtracking.

    Independent oracle: no permanents involved, just a DFS over positions
    with a used-value bitmask.  Limited to n <= 12.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > _BRUTE_XCHECK_MAX:
        raise CapacityError(f"brute enumeration limited to n <= {_BRUTE_XCHECK_MAX}")
    masks = _allowed_masks(n, constraint, k)
    full = (1 << n) - 1

    def walk(j: int, used: int) -> int:
        if j > n:
            return 1
        avail = masks[j] & ~used & full
        total = 0
        while avail:
            low = avail & -avail
            total += walk(j + 1, used | low)
            avail ^= low
        return total

    return walk(1, 0)


def compute(
    kind: str,
    n: int,
    aux: int | None = None,
    *,
    method: str = "auto",
    threads: int = 1,
    max_n: int = DEFAULT_MAX_N,
    ceiling: int = DEFAULT_CEILING,
) -> CountResult:
    """Dispatch a named count; the CLI's single entry point.

    ``method`` selects the computation path: "auto" uses the reduction
    lemmas, "permanent" forces the direct permanent of the defining
    matrix, "brute" the backtracking enumeration (n <= 12).
    """
    if kind == "c":
        if method == "auto":
            value = count_c(n, threads=threads, max_n=max_n, ceiling=ceiling)
        elif method == "permanent":
            value = permanent_ryser(
                build_full_coprime(n), threads=threads, ceiling=ceiling
            )
        elif method == "brute":
            value = brute_constrained_count(n, "coprime")
        else:
            raise ValueError(f"unknown method {method!r}")
    elif kind == "c0":
        if method == "brute":
            value = permanent_brute(build_odd_half(n))
        else:
            value = count_c0(n, threads=threads, ceiling=ceiling)
    elif kind == "c1":
        if method == "brute":
            value = sum(
                permanent_brute(build_odd_plus_excluding(n, a))
                for a in range(1, 2 * n + 2, 2)
            )
        else:
            value = count_c1(n, threads=threads, ceiling=ceiling)
    elif kind == "a":
        if method == "auto":
            value = count_a(n, threads=threads, ceiling=ceiling)
        elif method == "permanent":
            value = permanent_ryser(build_anti(n), threads=threads, ceiling=ceiling)
        elif method == "brute":
            value = brute_constrained_count(n, "anti")
        else:
            raise ValueError(f"unknown method {method!r}")
    elif kind == "ck":
        if aux is None:
            raise ValueError("kind 'ck' needs --aux K")
        if method == "brute":
            value = brute_constrained_count(n, "gcd_k", k=aux)
        else:
            value = count_ck(n, aux, threads=threads, ceiling=ceiling)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if value < 0:
        raise AssertionError("counts are nonnegative")
    if kind == "c" and value < 1:
        raise AssertionError("C(n) >= 1: the cyclic permutation is coprime")
    return CountResult(kind=kind, n=n, aux=aux, value=value, method=method)
