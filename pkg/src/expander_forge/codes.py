"""Hadamard codes and the zero-sum combinatorics on their codewords.

Codewords are stored as rows of a uint8 array and, where a hashable form
is handy, as tuples of bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np


@dataclass(frozen=True)
class BinaryCode:
    k: int
    words: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return int(math.log2(len(self.words)))

    @property
    def codewords(self) -> list[tuple[int, ...]]:
        return [tuple(int(b) for b in w) for w in self.words]

    def __len__(self) -> int:
        return len(self.words)

    def index(self, word) -> int:
        hits = np.flatnonzero((self.words == np.asarray(word, dtype=np.uint8)).all(axis=1))
        if len(hits) == 0:
            raise KeyError(f"{tuple(word)} is not a codeword")
        return int(hits[0])


def hadamard(k: int) -> BinaryCode:
    """Evaluations of every linear form on F_2^m (m = log2 k) at all k points.

    Point p is the binary expansion of p with bit t as the t-th variable;
    form c (also read in binary) maps p to popcount(c & p) mod 2. Row c is
    therefore the codeword of form c, so row 0 is the zero word.
    """
    if k < 2 or k & (k - 1):
        raise ValueError(f"k={k} must be a power of two, at least 2")
    pts = np.arange(k)
    prod = pts[:, None] & pts[None, :]
    bits = np.zeros_like(prod)
    while prod.any():
        bits ^= prod & 1
        prod >>= 1
    return BinaryCode(k, bits.astype(np.uint8))


def _xor(u, v) -> tuple[int, ...]:
    return tuple(a ^ b for a, b in zip(u, v))


def zero_sum_quadruple(S) -> tuple | None:
    """Four distinct words of S whose XOR vanishes, or None.

    Pairwise XORs take at most k values, so once |S| choose 2 exceeds what
    can stay collision-free two pairs must share a sum; pairs sharing a sum
    are disjoint (equal sums with a shared word force equal partners), and
    their union is the quadruple.
    """
    words = sorted({tuple(int(b) for b in w) for w in S})
    seen: dict[tuple[int, ...], tuple] = {}
    for u, v in combinations(words, 2):
        s = _xor(u, v)
        if s in seen:
            a, b = seen[s]
            return a, b, u, v
        seen[s] = (u, v)
    return None


def abc_decomposition(sigma) -> tuple[set[int], set[int], set[int]]:
    """Split the coordinates of a zero-sum quadruple into sets a, b, c.

    With s_j = sigma_1 xor sigma_j, a = supp(s2) & supp(s3),
    b = supp(s2) & supp(s4), c = supp(s3) & supp(s4).
    """
    sigma = [tuple(int(x) for x in w) for w in sigma]
    if len(sigma) != 4 or len(set(sigma)) != 4:
        raise ValueError("need four distinct codewords")
    if any(sum(col) % 2 for col in zip(*sigma)):
        raise ValueError("quadruple does not XOR to zero")
    s1 = sigma[0]
    supp = [{i for i, bit in enumerate(_xor(s1, w)) if bit} for w in sigma[1:]]
    a = supp[0] & supp[1]
    b = supp[0] & supp[2]
    c = supp[1] & supp[2]
    if a | b != supp[0] or a | c != supp[1] or b | c != supp[2]:
        raise ValueError("supports do not decompose; words are not from a common code")
    return a, b, c
