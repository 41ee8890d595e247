"""Faces of a cubical complex that meet a small vertex set U many times.

Middle vertices use the incidence-graph numbering ``c * |G| + g`` for
codeword index c. A face has exactly one corner of each type, so the number
of its corners in U is the number of codeword types whose corner lands in
U, and counting hits over the faces through each u in U gives it exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..codes import BinaryCode, abc_decomposition
from ..cubical import CubicalComplex, mask_of


class DensityHypothesisError(ValueError):
    pass


@dataclass
class HeavyFaceCount:
    count: int
    threshold: int
    faces: np.ndarray = field(repr=False)
    per_quadruple: dict = field(default_factory=dict)
    covered_by_quadruples: bool | None = None
    nu_checks: list = field(default_factory=list, repr=False)

    def __int__(self) -> int:
        return self.count


def heavy_threshold(k: int) -> int:
    return math.ceil(2 * math.sqrt(k) - 1e-12)


def size_limit(X: CubicalComplex, C: BinaryCode) -> int:
    """Largest |U| allowed: |G x C| / D-bar, with D-bar the full face degree."""
    return (X.group.order * len(C)) // X.n_sig


def _split(X, C, U):
    U = np.unique(np.asarray(U, dtype=np.int64))
    n = X.group.order
    if U.size and (U.min() < 0 or U.max() >= n * len(C)):
        raise ValueError("U contains an index outside G x C")
    c, g = np.divmod(U, n)
    return U, c, g


def _corner_members(X, C, U, faces) -> np.ndarray:
    """(len(faces), |C|) membership of each corner in U."""
    base, r = np.divmod(np.asarray(faces, dtype=np.int64), X.n_sig)
    n = X.group.order
    out = np.zeros((len(base), len(C)), dtype=bool)
    for c, w in enumerate(C.words):
        corner = np.asarray(X.group.mul(base, X.corner_offsets[mask_of(w), r]))
        out[:, c] = np.isin(c * n + corner, U)
    return out


def zero_sum_quadruples(C: BinaryCode) -> list[tuple[int, int, int, int]]:
    """Index quadruples of distinct codewords with vanishing XOR."""
    words = C.words.astype(np.int64)
    out = []
    for q in combinations(range(len(C)), 4):
        if not np.bitwise_xor.reduce(words[list(q)], axis=0).any():
            out.append(q)
    return out


def count_heavy_faces(X: CubicalComplex, C: BinaryCode, U, threshold: int | None = None, *,
                      enforce_size: bool = True, nu_checks: bool = False) -> HeavyFaceCount:
    """Exact number of faces with at least ``threshold`` corners in U.

    ``threshold`` defaults to ceil(2 sqrt k). Candidates come from the
    faces through each u in U; each one is confirmed by recomputing all of
    its corners. For k >= 4 the per-quadruple counts |F_k(U; sigma)| are
    reported as well, with the check that every heavy face lies in one of
    them, and optionally the per-vertex nu^{3/2} data.
    """
    if C.k != X.k:
        raise ValueError("code length does not match the complex")
    U, types, gs = _split(X, C, U)
    if enforce_size and len(U) > size_limit(X, C):
        raise DensityHypothesisError(
            f"|U| = {len(U)} exceeds |G x C| / D-bar = {size_limit(X, C)} (small-set hypothesis)")
    if threshold is None:
        threshold = heavy_threshold(X.k)
    if len(U) == 0:
        return HeavyFaceCount(0, threshold, np.zeros(0, dtype=np.int64))
    parts = []
    for c in np.unique(types):
        g = gs[types == c]
        inv = X.inverse_offsets[mask_of(C.words[c])]
        base = np.asarray(X.group.mul(g[:, None], inv[None, :]))
        parts.append((base * X.n_sig + np.arange(X.n_sig)).ravel())
    faces, hits = np.unique(np.concatenate(parts), return_counts=True)
    low = min(threshold, 4) if X.k >= 4 else threshold
    cand = faces[hits >= max(low, 1)]
    member = _corner_members(X, C, U, cand)
    confirmed = member.sum(axis=1)
    if not np.array_equal(confirmed, hits[hits >= max(low, 1)]):
        raise AssertionError("hit counts disagree with explicit corner check")
    heavy = confirmed >= threshold
    out = HeavyFaceCount(int(heavy.sum()), threshold, cand[heavy])
    if X.k >= 4:
        quads = zero_sum_quadruples(C)
        covered = np.zeros(len(cand), dtype=bool)
        for q in quads:
            inside = member[:, list(q)].all(axis=1)
            out.per_quadruple[q] = int(inside.sum())
            covered |= inside
        if threshold >= heavy_threshold(X.k):
            out.covered_by_quadruples = bool(covered[heavy].all())
        if nu_checks:
            out.nu_checks = [check_nu_bound(X, C, U, q) for q in quads if out.per_quadruple[q]]
    return out


def full_scan_heavy_faces(X: CubicalComplex, C: BinaryCode, U, threshold: int | None = None,
                          return_faces: bool = False):
    """Oracle: corner-count every face of X(k) directly."""
    U, _, _ = _split(X, C, U)
    if threshold is None:
        threshold = heavy_threshold(X.k)
    n = X.group.order
    inU = np.zeros(n * len(C), dtype=bool)
    inU[U] = True
    counts = np.zeros((n, X.n_sig), dtype=np.int16)
    for c, w in enumerate(C.words):
        counts += inU[c * n + X.corner_table(w)]
    heavy = counts.ravel() >= threshold
    if return_faces:
        return int(heavy.sum()), np.flatnonzero(heavy)
    return int(heavy.sum())


def _codeword_indices(C, sigma):
    idx = []
    for s in sigma:
        idx.append(int(s) if isinstance(s, (int, np.integer)) else C.index(s))
    return idx


def check_nu_bound(X: CubicalComplex, C: BinaryCode, U, sigma) -> dict:
    """Per-vertex |F_C(u; U; sigma)| against nu^{3/2} for every u of type sigma_1.

    ``sigma`` holds four codewords (or codeword indices). The subcube runs
    through sigma_1 spanned by the union of supp(sigma_1 xor sigma_j).
    """
    idx = _codeword_indices(C, sigma)
    words = [tuple(int(b) for b in C.words[i]) for i in idx]
    a, b, c = abc_decomposition(words)
    U, types, gs = _split(X, C, U)
    n = X.group.order
    m1 = mask_of(words[0])
    spread = 0
    for w in words[1:]:
        spread |= mask_of(w) ^ m1
    free = tuple(i for i in range(X.k) if spread >> i & 1)
    sub = X._subcomplex(free)
    local = [sum(((mask_of(w) >> c_) & 1) << s for s, c_ in enumerate(free)) for w in words]
    inU = np.zeros(n * len(C), dtype=bool)
    inU[U] = True
    # neighbourhood products for each s = sigma_j
    prods = []
    for w in words[1:]:
        p = np.array([X.group.identity], dtype=np.int64)
        for i in range(X.k):
            if (mask_of(w) ^ m1) >> i & 1:
                p = np.asarray(X.group.mul(p[:, None], X.sets[i][None, :])).ravel()
        prods.append(p)
    rows = []
    ok = True
    for g in gs[types == idx[0]]:
        base = np.asarray(X.group.mul(int(g), sub.inverse_offsets[local[0]]))
        good = np.ones(sub.n_sig, dtype=bool)
        for t, z in zip(idx[1:], local[1:]):
            good &= inU[t * n + np.asarray(X.group.mul(base, sub.corner_offsets[z]))]
        f_count = int(good.sum())
        nbr = [int(inU[t * n + np.asarray(X.group.mul(int(g), p))].sum())
               for t, p in zip(idx[1:], prods)]
        nu = max(nbr)
        refined = math.sqrt(math.prod(nbr))
        holds = f_count <= nu ** 1.5 + 1e-9 and f_count <= refined + 1e-9
        ok &= holds
        rows.append({"u": int(idx[0] * n + g), "F": f_count, "nu": nu, "N": nbr,
                     "nu_bound": nu ** 1.5, "product_bound": refined, "holds": holds})
    return {"sigma": tuple(idx), "a": sorted(a), "b": sorted(b), "c": sorted(c),
            "delta": list(free), "vertices": rows, "holds": bool(ok)}
