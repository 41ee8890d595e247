"""Cayley cubical complexes over a dense group.

A k-face is stored as ``(base, sig)``: ``base`` is the group index of the
corner at type 0^k and ``sig`` is a tuple of local generator indices
``(a_1, ..., a_k)`` read along the ascending path 0^k -> e_1 -> e_1+e_2 ...
so that the top corner is ``base * a_1 * ... * a_k``. Every other corner is
found by rewriting that word with the swap tables until the generators of
supp(x) come first; ``corner_offsets[x][rank(sig)]`` caches the resulting
prefix for every type x and signature.

Types x in {0,1}^k are passed around as bit tuples at the API boundary and
as integer masks (bit i <-> coordinate i) internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations

import numpy as np
from scipy.sparse import csr_matrix


class CubicalGeneratorError(ValueError):
    """A generating-set invariant failed; ``witness`` shows where."""

    def __init__(self, invariant: str, witness, message: str = ""):
        self.invariant = invariant
        self.witness = witness
        super().__init__(message or f"{invariant} violated: {witness!r}")


def mask_of(x) -> int:
    if isinstance(x, (int, np.integer)):
        return int(x)
    return sum(int(b) << i for i, b in enumerate(x))


def bits_of(mask: int, k: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(k))


def _support(mask: int, k: int) -> list[int]:
    return [i for i in range(k) if mask >> i & 1]


@dataclass(frozen=True)
class SwapTable:
    """``table[(i, j)][a_i, a_j] = (b_j, b_i)`` with a_i a_j = b_j b_i (local indices)."""

    table: dict

    def swap(self, i: int, j: int, a_i: int, a_j: int) -> tuple[int, int]:
        b = self.table[(i, j)][a_i, a_j]
        return int(b[0]), int(b[1])


@dataclass(frozen=True)
class Face:
    base: int
    gens: tuple[int, ...]


@dataclass(frozen=True)
class DecoratedVertex:
    g: int
    x: tuple[int, ...]


@dataclass(frozen=True)
class SubcubeFace:
    """A face of the subcube through ``origin`` spanned by the coordinates ``free``.

    ``base`` is the corner at type ``origin`` and ``gens`` the local generator
    indices over ``free`` in ascending coordinate order.
    """

    free: tuple[int, ...]
    origin: int
    base: int
    gens: tuple[int, ...]


def validate_generators(group, sets) -> "CubicalComplex":
    """Check the cubical generating conditions and build the swap tables.

    ``sets`` are iterables of group indices. Raises
    :class:`CubicalGeneratorError` naming the first failed invariant.
    """
    sets = [np.array(sorted({int(a) for a in s}), dtype=np.int64) for s in sets]
    for i, A in enumerate(sets):
        if len(A) == 0:
            raise CubicalGeneratorError("nonempty", i)
        inv = set(np.asarray(group.inv(A)).tolist())
        missing = inv - set(A.tolist())
        if missing:
            a = int(group.inv(min(missing)))
            raise CubicalGeneratorError("inverse-closed", (i, a))
    swaps = {}
    for i, j in permutations(range(len(sets)), 2):
        Ai, Aj = sets[i], sets[j]
        fwd = np.asarray(group.mul(Ai[:, None], Aj[None, :]))
        bwd = np.asarray(group.mul(Aj[:, None], Ai[None, :]))
        for prod, (s, t) in ((fwd, (i, j)), (bwd, (j, i))):
            flat = prod.ravel()
            vals, first, counts = np.unique(flat, return_index=True, return_counts=True)
            if len(vals) < flat.size:
                dup = vals[np.argmax(counts > 1)]
                hits = np.argwhere(prod == dup)[:2]
                witness = tuple((int(sets[s][h[0]]), int(sets[t][h[1]])) for h in hits)
                raise CubicalGeneratorError("product-size", witness,
                                            f"|A_{s}A_{t}| < |A_{s}||A_{t}|: {witness} collide")
        order = np.argsort(bwd.ravel())
        sorted_bwd = bwd.ravel()[order]
        pos = np.searchsorted(sorted_bwd, fwd.ravel())
        pos = np.minimum(pos, len(sorted_bwd) - 1)
        ok = sorted_bwd[pos] == fwd.ravel()
        if not ok.all():
            x, y = np.unravel_index(int(np.argmin(ok)), fwd.shape)
            raise CubicalGeneratorError("set-commuting", (i, j, int(Ai[x]), int(Aj[y])),
                                        f"A_{i}A_{j} != A_{j}A_{i}: {int(Ai[x])}*{int(Aj[y])}"
                                        f" has no factorization in A_{j}A_{i}")
        flat = order[pos]
        swaps[(i, j)] = np.stack(np.unravel_index(flat, bwd.shape), axis=-1).reshape(
            len(Ai), len(Aj), 2)
    complex_ = CubicalComplex(group, sets, SwapTable(swaps))
    # full product size, checked on the cached top-corner offsets
    top = complex_.corner_offsets[(1 << complex_.k) - 1]
    vals, counts = np.unique(top, return_counts=True)
    if len(vals) < len(top):
        dup = vals[np.argmax(counts > 1)]
        sigs = [tuple(int(v) for v in complex_.signatures[r]) for r in np.flatnonzero(top == dup)[:2]]
        raise CubicalGeneratorError("full-product-size", sigs)
    return complex_


class CubicalComplex:
    """Decorated Cayley cubical complex with faces addressed as (base, sig)."""

    def __init__(self, group, sets, swaps: SwapTable):
        self.group = group
        self.sets = [np.asarray(s, dtype=np.int64) for s in sets]
        self.swaps = swaps
        self.k = len(self.sets)
        self.sizes = tuple(len(s) for s in self.sets)
        self.n_sig = math.prod(self.sizes)
        self._sub: dict = {}

    def __repr__(self) -> str:
        return f"CubicalComplex(k={self.k}, sizes={self.sizes}, |G|={self.group.order})"

    @cached_property
    def signatures(self) -> np.ndarray:
        """All local-index tuples, lexicographic; row r is the signature of rank r."""
        if self.k == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.sizes).reshape(self.k, -1).T
        return np.ascontiguousarray(grids, dtype=np.int64)

    def rank(self, sig) -> int:
        return int(np.ravel_multi_index(tuple(int(a) for a in sig), self.sizes)) if self.k else 0

    @property
    def face_count(self) -> int:
        return self.group.order * self.n_sig

    def face_index(self, face: Face) -> int:
        return face.base * self.n_sig + self.rank(face.gens)

    def face(self, index: int) -> Face:
        base, r = divmod(int(index), self.n_sig)
        return Face(base, tuple(int(a) for a in self.signatures[r]))

    # corner arithmetic -------------------------------------------------

    def _normalize(self, sigs: np.ndarray, front: list[int]) -> tuple[np.ndarray, list[int]]:
        """Rewrite each word so the coordinates in ``front`` lead, in that order.

        Adjacent generators are exchanged with the swap tables (a bubble sort
        on the coordinate labels); the product of the word never changes.
        """
        rank = {c: t for t, c in enumerate(front)}
        rest = [c for c in range(self.k) if c not in rank]
        for t, c in enumerate(rest):
            rank[c] = len(front) + t
        coords = list(range(self.k))
        word = sigs.copy()
        for _ in range(self.k):
            for p in range(self.k - 1):
                c1, c2 = coords[p], coords[p + 1]
                if rank[c1] > rank[c2]:
                    tab = self.swaps.table[(c1, c2)]
                    pair = tab[word[:, p], word[:, p + 1]]
                    word[:, p], word[:, p + 1] = pair[:, 0], pair[:, 1]
                    coords[p], coords[p + 1] = c2, c1
        return word, coords

    def _prefix_product(self, word: np.ndarray, coords: list[int], length: int) -> np.ndarray:
        g = np.full(len(word), self.group.identity, dtype=np.int64)
        for p in range(length):
            g = np.asarray(self.group.mul(g, self.sets[coords[p]][word[:, p]]))
        return g

    @cached_property
    def corner_offsets(self) -> np.ndarray:
        """(2^k, n_sig) array: corner of type x of the face (identity, sig)."""
        out = np.empty((1 << self.k, self.n_sig), dtype=np.int64)
        for x in range(1 << self.k):
            supp = _support(x, self.k)
            word, coords = self._normalize(self.signatures, supp)
            out[x] = self._prefix_product(word, coords, len(supp))
        return out

    @cached_property
    def inverse_offsets(self) -> np.ndarray:
        return np.asarray(self.group.inv(self.corner_offsets))

    def corner(self, face: Face, x) -> int:
        w = self.corner_offsets[mask_of(x), self.rank(face.gens)]
        return int(self.group.mul(face.base, w))

    def corner_via_order(self, face: Face, x, order) -> int:
        """Corner of type x, rewriting the word so supp(x) leads in ``order``."""
        supp = _support(mask_of(x), self.k)
        if sorted(order) != supp:
            raise ValueError(f"order {order} is not a permutation of supp(x) = {supp}")
        word, coords = self._normalize(np.array([face.gens], dtype=np.int64), list(order))
        w = self._prefix_product(word, coords, len(supp))[0]
        return int(self.group.mul(face.base, w))

    def corners(self, face: Face) -> list[DecoratedVertex]:
        return [DecoratedVertex(self.corner(face, x), bits_of(x, self.k)) for x in range(1 << self.k)]

    def corner_table(self, x) -> np.ndarray:
        """(|G|, n_sig) corners of type x for every face; row = base."""
        g = np.arange(self.group.order, dtype=np.int64)[:, None]
        return np.asarray(self.group.mul(g, self.corner_offsets[mask_of(x)][None, :]))

    def faces_containing(self, g: int, x) -> np.ndarray:
        """Face indices of every face with corner g at type x, in signature order."""
        base = np.asarray(self.group.mul(g, self.inverse_offsets[mask_of(x)]))
        return base * self.n_sig + np.arange(self.n_sig)

    # completion of partial corner data

    def _subcomplex(self, free: tuple[int, ...]) -> "CubicalComplex":
        if free not in self._sub:
            sets = [self.sets[i] for i in free]
            table = {(s, t): self.swaps.table[(free[s], free[t])]
                     for s, t in permutations(range(len(free)), 2)}
            self._sub[free] = CubicalComplex(self.group, sets, SwapTable(table))
        return self._sub[free]

    def complete_faces(self, U) -> tuple[SubcubeFace | None, int]:
        """The unique face of the subcube spanned by U containing U, if any.

        The subcube runs through the type of the first vertex and is spanned
        by S(U), the union of supp(x_t xor x_1). Its faces are the faces of
        the complex on the generator sets A_i, i in S(U), so only those
        signatures are searched. Returns the face and the number of k-faces
        extending it, prod_{i not in S(U)} |A_i|, or (None, 0).
        """
        U = [v if isinstance(v, DecoratedVertex) else DecoratedVertex(int(v[0]), tuple(v[1]))
             for v in U]
        if not U:
            raise ValueError("U must be nonempty")
        masks = [mask_of(v.x) for v in U]
        x1 = masks[0]
        spread = 0
        for m in masks[1:]:
            spread |= m ^ x1
        free = tuple(_support(spread, self.k))
        origin = x1 & ~spread
        sub = self._subcomplex(free)
        local = [sum(((m >> c) & 1) << s for s, c in enumerate(free)) for m in masks]
        # base of every candidate subcube face, anchored at the first vertex
        base = np.asarray(self.group.mul(U[0].g, sub.inverse_offsets[local[0]]))
        hit = np.ones(sub.n_sig, dtype=bool)
        for v, z in zip(U[1:], local[1:]):
            hit &= np.asarray(self.group.mul(base, sub.corner_offsets[z])) == v.g
        ranks = np.flatnonzero(hit)
        if len(ranks) == 0:
            return None, 0
        if len(ranks) > 1:
            raise AssertionError(f"{len(ranks)} subcube faces contain U; generating sets are invalid")
        r = int(ranks[0])
        face = SubcubeFace(free, origin, int(base[r]), tuple(int(a) for a in sub.signatures[r]))
        ext = math.prod(self.sizes[i] for i in range(self.k) if i not in free)
        return face, ext

    def subcube_corners(self, face: SubcubeFace) -> dict[int, int]:
        """Type mask -> corner for every vertex of a subcube face."""
        sub = self._subcomplex(face.free)
        r = sub.rank(face.gens)
        out = {}
        for z in range(1 << len(face.free)):
            x = face.origin
            for s, c in enumerate(face.free):
                if z >> s & 1:
                    x |= 1 << c
            out[x] = int(self.group.mul(face.base, sub.corner_offsets[z, r]))
        return out

    # type-pair graphs ----------------------------------------------------

    def type_pair_graph(self, y, x) -> csr_matrix:
        """Biadjacency of I_{y, y xor x}: (g, y) ~ (g * prod_{i in supp x} a_i, y xor x).

        The edge set does not depend on y; y is accepted for the signature
        of the definition and validated.
        """
        xm = mask_of(x)
        if xm == 0:
            raise ValueError("x must be nonzero")
        if not 0 <= mask_of(y) < (1 << self.k):
            raise ValueError("y out of range")
        supp = _support(xm, self.k)
        prods = np.array([self.group.identity], dtype=np.int64)
        for i in supp:
            prods = np.asarray(self.group.mul(prods[:, None], self.sets[i][None, :])).ravel()
        n, d = self.group.order, len(prods)
        cols = np.asarray(self.group.mul(np.arange(n)[:, None], prods[None, :]))
        cols.sort(axis=1)
        return csr_matrix((np.ones(n * d), cols.ravel(), np.arange(0, n * d + 1, d)), shape=(n, n))


def face_count(X: CubicalComplex) -> int:
    return X.face_count


def corner(X: CubicalComplex, face: Face, x) -> int:
    return X.corner(face, x)


def complete_faces(X: CubicalComplex, U):
    return X.complete_faces(U)


def type_pair_graph(X: CubicalComplex, y, x) -> csr_matrix:
    return X.type_pair_graph(y, x)


def subcube_masks(k: int, max_dim: int | None = None):
    """(free coordinates, origin) for every subcube, smallest dimension first."""
    for dim in range(0, (k if max_dim is None else max_dim) + 1):
        for free in combinations(range(k), dim):
            fmask = sum(1 << c for c in free)
            for origin in range(1 << k):
                if origin & fmask == 0:
                    yield free, origin
