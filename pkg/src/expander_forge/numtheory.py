"""Integer and modular primitives used to parameterize every construction.

Primality is plain trial division: every modulus used here stays far below
10**7, so a deterministic check is cheap and never wrong.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class SearchExhausted(RuntimeError):
    """A bounded prime search ran out of budget."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


def divisor_sum(n: int) -> int:
    total = 0
    for m in range(1, math.isqrt(n) + 1):
        if n % m == 0:
            total += m
            if m * m != n:
                total += n // m
    return total


@lru_cache(maxsize=8)
def _two_square_table(limit: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """All (a, b) with a^2 + b^2 <= limit, sorted lexicographically.

    Each pair is packed as two int16 halves of one int32 word so that whole
    pairs can be gathered at once. Returns the packed pairs in lex order,
    their sums of squares, a CSR range per value m, and the packed pairs
    regrouped by m (lex order within each group).
    """
    r = math.isqrt(limit)
    a, b = np.meshgrid(np.arange(-r, r + 1), np.arange(-r, r + 1), indexing="ij")
    a, b = a.ravel(), b.ravel()
    s = a * a + b * b
    keep = s <= limit
    pairs = np.stack([a[keep], b[keep]], axis=1).astype(np.int16)
    words = np.ascontiguousarray(pairs).view(np.int32).ravel()
    sums = s[keep].astype(np.int64)
    # meshgrid with ij indexing is already lexicographic in (a, b)
    by_sum = words[np.argsort(sums, kind="stable")]
    counts = np.bincount(sums, minlength=limit + 1)
    indptr = np.zeros(limit + 2, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return words, sums, np.stack([indptr[:-1], indptr[1:]], axis=1), by_sum


def four_square_representations(n: int) -> np.ndarray:
    """All integer 4-tuples with a^2+b^2+c^2+d^2 = n, lexicographically sorted.

    Returned as an ``(r_4(n), 4)`` int16 array. Only odd ``n`` is accepted
    since that is the range where Jacobi's divisor formula is used.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError(f"n must be an odd positive integer, got {n}")
    words, sums, bounds, by_sum = _two_square_table(_table_limit(n))
    head = sums <= n
    ab = words[head]
    rest = n - sums[head]
    lo = bounds[rest, 0]
    counts = bounds[rest, 1] - lo
    total = int(counts.sum())
    out = np.empty((total, 2), dtype=np.int32)
    if total:
        out[:, 0] = np.repeat(ab, counts)
        pos = np.repeat((lo - (np.cumsum(counts) - counts)).astype(np.int32), counts)
        pos += np.arange(total, dtype=np.int32)
        out[:, 1] = by_sum[pos]
    return out.view(np.int16).reshape(total, 4)


def four_square_count(n: int) -> int:
    """r_4(n) counted through the same two-square decomposition, without listing."""
    if n < 1:
        raise ValueError("n must be positive")
    _, sums, bounds, _ = _two_square_table(_table_limit(n))
    c2 = bounds[: n + 1, 1] - bounds[: n + 1, 0]
    return int(np.dot(c2, c2[::-1]))


def _table_limit(n: int) -> int:
    # round up so nearby calls share one cached table
    limit = 1024
    while limit < n:
        limit *= 2
    return limit


def is_quadratic_residue(a: int, q: int) -> bool:
    """Euler's criterion for an odd prime ``q``."""
    if q < 3 or q % 2 == 0:
        raise ValueError(f"q must be an odd prime, got {q}")
    if a % q == 0:
        raise ValueError(f"{a} is divisible by {q}; residuosity undefined")
    return pow(a % q, (q - 1) // 2, q) == 1


@dataclass(frozen=True)
class PrimeParams:
    """Primes p_1 < ... < p_k and modulus q for a Ramanujan cubical complex."""

    p_list: tuple[int, ...]
    q: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_list", tuple(int(p) for p in self.p_list))
        problem = prime_params_violation(self.p_list, self.q)
        if problem:
            raise ValueError(problem)

    @property
    def k(self) -> int:
        return len(self.p_list)


def prime_params_violation(p_list, q: int) -> str | None:
    """Name the first violated PrimeParams invariant, or None if all hold."""
    p_list = list(p_list)
    if list(p_list) != sorted(set(p_list)):
        return f"p_list must be ascending and distinct: {p_list}"
    if not is_prime(q) or q % 4 != 1:
        return f"q={q} must be a prime congruent to 1 mod 4"
    for p in p_list:
        if not is_prime(p) or p % 4 != 1:
            return f"p={p} must be a prime congruent to 1 mod 4"
        if p >= q:
            return f"p={p} must be smaller than q={q}"
        if not is_quadratic_residue(p, q):
            return f"p={p} is not a quadratic residue mod q={q}"
    prod = math.prod(p_list)
    if q * q <= 4 * prod:
        return f"q={q} must exceed 2*sqrt({prod})"
    return None


def find_modulus_prime(p_list, q_min: int = 2, *, mode: str = "progression",
                       budget: int = 10**6) -> int:
    """Smallest admissible modulus q >= q_min for the primes in ``p_list``.

    ``mode="progression"`` walks 1 + 4*prod(p)*l, where reciprocity makes
    every p_i a residue automatically. ``mode="scan"`` tries every prime
    q = 1 mod 4 and tests residuosity directly; it finds much smaller moduli
    (29 for {5, 13}) and is what desk-scale instances use.
    """
    p_list = sorted(int(p) for p in p_list)
    for p in p_list:
        if not is_prime(p) or p % 4 != 1:
            raise ValueError(f"p={p} must be a prime congruent to 1 mod 4")
    if len(set(p_list)) != len(p_list):
        raise ValueError("primes must be distinct")
    if mode == "progression":
        step = 4 * math.prod(p_list)
    elif mode == "scan":
        step = 4
    else:
        raise ValueError(f"unknown mode {mode!r}")
    q = 1 + step * max(0, -(-(q_min - 1) // step))
    for _ in range(budget):
        if q >= q_min and prime_params_violation(p_list, q) is None:
            return q
        q += step
    raise SearchExhausted(f"no modulus found for {p_list} within {budget} candidates")


def find_prime_band(k: int, x: float, ratio: float) -> list[int]:
    """The first ``k`` primes congruent to 1 mod 4 inside ``[x, ratio*x]``."""
    if ratio <= 1 or k < 1:
        raise ValueError("need ratio > 1 and k >= 1")
    lo, hi = math.ceil(x), math.floor(ratio * x)
    found = []
    p = lo + (1 - lo) % 4
    while p <= hi and len(found) < k:
        if is_prime(p):
            found.append(p)
        p += 4
    if len(found) < k:
        raise SearchExhausted(
            f"band [{x}, {ratio * x}] holds only {len(found)} primes = 1 mod 4, need {k}")
    return found
