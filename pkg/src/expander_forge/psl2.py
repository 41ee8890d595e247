"""Arithmetic in PSL(2, F_q) and the quaternion embedding.

Two layers live here. :class:`PSL2Element` and :class:`Quaternion` are small
immutable value types for exact scalar work (generator sets, swap tables).
:class:`PSL2Group` enumerates the whole group once and does bulk arithmetic
on dense integer indices with numpy, which is what the graph builders use.

A coset {M, -M} is represented by the matrix whose first nonzero entry in
row-major order lies in [1, (q-1)/2]. Canonical keys ``((a*q+b)*q+c)*q+d``
give a total order used for hashing, sorting and dense numbering.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numtheory import is_prime, is_quadratic_residue


def group_order(q: int) -> int:
    return q * (q * q - 1) // 2


@lru_cache(maxsize=64)
def sqrt_minus_one(q: int) -> int:
    """Smallest j in [1, q) with j^2 = -1 mod q."""
    if q % 4 != 1 or not is_prime(q):
        raise ValueError(f"-1 has no square root mod {q}; need a prime q = 1 mod 4")
    return _sqrt_mod(q - 1, q)


def _sqrt_mod(a: int, q: int) -> int:
    """Smallest c in [1, q) with c^2 = a mod q, by Tonelli-Shanks.

    The two roots are r and q - r, so the smaller one is returned.
    """
    a %= q
    if a == 0 or pow(a, (q - 1) // 2, q) != 1:
        raise ValueError(f"{a} is not a nonzero square mod {q}")
    s, m = 0, q - 1
    while m % 2 == 0:
        s, m = s + 1, m // 2
    z = 2
    while pow(z, (q - 1) // 2, q) != q - 1:
        z += 1
    c, t, r = pow(z, m, q), pow(a, m, q), pow(a, (m + 1) // 2, q)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % q
            i += 1
        b = pow(c, 1 << (s - i - 1), q)
        s, c = i, b * b % q
        t, r = t * c % q, r * b % q
    return min(r, q - r)


def _canonical(a: int, b: int, c: int, d: int, q: int) -> tuple[int, int, int, int]:
    a, b, c, d = a % q, b % q, c % q, d % q
    lead = a or b
    if lead > (q - 1) // 2:
        a, b, c, d = (-a) % q, (-b) % q, (-c) % q, (-d) % q
    return a, b, c, d


@dataclass(frozen=True, order=True)
class PSL2Element:
    """A coset {M, -M} of a determinant-one 2x2 matrix over F_q.

    Construct through :meth:`from_matrix` so that the stored entries are the
    canonical representative; the dataclass ordering then follows the key.
    """

    key: int
    q: int

    @classmethod
    def from_matrix(cls, a: int, b: int, c: int, d: int, q: int) -> "PSL2Element":
        if (a * d - b * c) % q != 1:
            raise ValueError(f"determinant of [[{a},{b}],[{c},{d}]] is not 1 mod {q}")
        a, b, c, d = _canonical(a, b, c, d, q)
        return cls(((a * q + b) * q + c) * q + d, q)

    @classmethod
    def identity(cls, q: int) -> "PSL2Element":
        return cls.from_matrix(1, 0, 0, 1, q)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        q, key = self.q, self.key
        d = key % q
        key //= q
        c = key % q
        key //= q
        return key // q, key % q, c, d

    def __mul__(self, other: "PSL2Element") -> "PSL2Element":
        if self.q != other.q:
            raise ValueError(f"modulus mismatch: {self.q} vs {other.q}")
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        q = self.q
        return PSL2Element.from_matrix(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, q)

    def inverse(self) -> "PSL2Element":
        a, b, c, d = self.entries
        return PSL2Element.from_matrix(d, -b, -c, a, self.q)

    def __repr__(self) -> str:
        a, b, c, d = self.entries
        return f"PSL2Element([[{a}, {b}], [{c}, {d}]] mod {self.q})"


def multiply(x: PSL2Element, y: PSL2Element) -> PSL2Element:
    return x * y


def inverse(x: PSL2Element) -> PSL2Element:
    return x.inverse()


@dataclass(frozen=True)
class Quaternion:
    """Integral quaternion a + b*i + c*j + d*k."""

    a: int
    b: int
    c: int
    d: int

    @property
    def norm(self) -> int:
        return self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2

    @property
    def trace(self) -> int:
        return self.a

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, o: "Quaternion") -> "Quaternion":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = o.a, o.b, o.c, o.d
        return Quaternion(
            a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g - b * h + c * e + d * f,
            a * h + b * g - c * f + d * e,
        )


def embed(alpha: Quaternion, q: int) -> PSL2Element:
    """Send an integral quaternion of residue norm into PSL(2, F_q).

    The imaginary unit becomes j with j^2 = -1 and the matrix is scaled by
    the smallest c with c^2 * N(alpha) = 1 mod q.
    """
    n = alpha.norm
    if n % q == 0 or not is_quadratic_residue(n, q):
        raise ValueError(f"norm {n} is not a nonzero quadratic residue mod {q}")
    j = sqrt_minus_one(q)
    scale = _sqrt_mod(pow(n, -1, q), q)
    a, b, c, d = alpha.a, alpha.b, alpha.c, alpha.d
    m = (a + b * j, c + d * j, -c + d * j, a - b * j)
    return PSL2Element.from_matrix(*(scale * x for x in m), q)


class PSL2Group:
    """The whole of PSL(2, F_q) with dense numbering 0..|G|-1 by canonical key.

    All bulk methods take and return integer index arrays.
    """

    def __init__(self, q: int):
        if not is_prime(q) or q % 4 != 1:
            raise ValueError(f"q={q} must be a prime congruent to 1 mod 4")
        self.q = q
        self.mats = _enumerate_psl2(q)
        self.keys = _keys(self.mats, q)
        self.order = len(self.keys)
        if self.order != group_order(q):
            raise AssertionError(f"enumerated {self.order} cosets, expected {group_order(q)}")
        self.identity = self.index(PSL2Element.identity(q))

    def __len__(self) -> int:
        return self.order

    def index(self, g: PSL2Element) -> int:
        pos = int(np.searchsorted(self.keys, g.key))
        if pos >= self.order or self.keys[pos] != g.key or g.q != self.q:
            raise ValueError(f"{g!r} is not in PSL(2, {self.q})")
        return pos

    def element(self, i: int) -> PSL2Element:
        return PSL2Element(int(self.keys[i]), self.q)

    def _lookup(self, mats: np.ndarray) -> np.ndarray:
        keys = _keys(_canonicalize(mats, self.q), self.q)
        return np.searchsorted(self.keys, keys)

    def mul(self, x, y) -> np.ndarray:
        """Elementwise product of index arrays (broadcasting)."""
        x, y = np.broadcast_arrays(np.asarray(x), np.asarray(y))
        shape = x.shape
        m, n = self.mats[x.ravel()], self.mats[y.ravel()]
        q = self.q
        out = np.empty_like(m)
        out[:, 0] = (m[:, 0] * n[:, 0] + m[:, 1] * n[:, 2]) % q
        out[:, 1] = (m[:, 0] * n[:, 1] + m[:, 1] * n[:, 3]) % q
        out[:, 2] = (m[:, 2] * n[:, 0] + m[:, 3] * n[:, 2]) % q
        out[:, 3] = (m[:, 2] * n[:, 1] + m[:, 3] * n[:, 3]) % q
        return self._lookup(out).reshape(shape)

    def inv(self, x) -> np.ndarray:
        x = np.asarray(x)
        m = self.mats[x.ravel()]
        out = np.stack([m[:, 3], -m[:, 1], -m[:, 2], m[:, 0]], axis=1) % self.q
        return self._lookup(out).reshape(x.shape)


def _enumerate_psl2(q: int) -> np.ndarray:
    """Canonical matrices of every coset, sorted by key, as an (n, 4) int64 array."""
    r = np.arange(q, dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    inv[1:] = [pow(int(t), -1, q) for t in r[1:]]
    # a != 0: b, c free and d = (1 + b c) / a
    a, b, c = (g.ravel() for g in np.meshgrid(r[1:], r, r, indexing="ij"))
    d = (1 + b * c) % q * inv[a] % q
    part1 = np.stack([a, b, c, d], axis=1)
    # a == 0: b != 0, c = -1/b, d free
    b, d = (g.ravel() for g in np.meshgrid(r[1:], r, indexing="ij"))
    c = (-inv[b]) % q
    part2 = np.stack([np.zeros_like(b), b, c, d], axis=1)
    mats = _canonicalize(np.concatenate([part1, part2]), q)
    keys, first = np.unique(_keys(mats, q), return_index=True)
    return mats[first]


def _canonicalize(m: np.ndarray, q: int) -> np.ndarray:
    lead = np.where(m[:, 0] != 0, m[:, 0], m[:, 1])
    flip = lead > (q - 1) // 2
    out = m.copy()
    out[flip] = (-m[flip]) % q
    return out


def _keys(m: np.ndarray, q: int) -> np.ndarray:
    return ((m[:, 0] * q + m[:, 1]) * q + m[:, 2]) * q + m[:, 3]
