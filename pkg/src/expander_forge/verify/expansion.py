"""Small-set expansion profiles of one side of a bipartite graph.

A side is described by ``rows``: for each vertex the far endpoints of its
edges, one entry per edge slot. |N(S)| counts distinct far endpoints and a
unique neighbour is a far vertex hit by exactly one slot from S.

Exact minima below ``exhaustive_cap``:

* small graphs: every subset is evaluated;
* graphs with a free transitive-on-orbits group action (the line product):
  only sets connected through shared neighbours and containing an orbit
  representative are enumerated. Pieces of a disconnected set have
  disjoint neighbourhoods, so their counts add, and the size-s minimum is
  the best split of s into connected pieces. Each split used is realised
  by translating witnesses apart and re-evaluated.

Sizes at or above the cap fall back to random connected sets refined by
greedy swaps; those records are upper bounds on the true minimum, i.e. a
search for bad sets, not a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..parallel import map_items, spawn


@dataclass
class SizeRecord:
    size: int
    min_neighbors: int
    ratio: float
    min_unique: int
    unique_ratio: float
    mode: str
    evaluated: int
    witness: tuple = ()
    max_j_heavy: int | None = None


@dataclass
class ExpansionProfile:
    side: str
    degree: int
    n_vertices: int
    records: list = field(default_factory=list)

    def record(self, size: int) -> SizeRecord:
        for r in self.records:
            if r.size == size:
                return r
        raise KeyError(size)

    def as_dict(self) -> dict:
        return {"side": self.side, "degree": self.degree, "n_vertices": self.n_vertices,
                "records": [vars(r) for r in self.records]}


@dataclass
class SideView:
    rows: np.ndarray  # (n, d) far endpoints
    far_rows: np.ndarray | None = None  # (n_far, d_far) near endpoints
    reps: np.ndarray | None = None  # orbit representatives
    translate: object = None  # (gamma, vertices) -> vertices
    group_order: int = 0

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def d(self) -> int:
        return self.rows.shape[1]

    def n2(self, v: int) -> np.ndarray:
        near = np.unique(self.far_rows[self.rows[v]].ravel())
        return near[near != v]


def _rows_from_csr(ptr, order, endpoints, n) -> np.ndarray:
    deg = np.diff(ptr)
    if deg.size and deg.min() != deg.max():
        raise ValueError("side is not regular")
    d = int(deg[0]) if deg.size else 0
    return np.sort(endpoints[order].reshape(n, d), axis=1)


def side_view(graph, side: str = "L") -> SideView:
    """Adapter for ProductGraph, GadgetGraph or a (dense/sparse) biadjacency."""
    if hasattr(graph, "slots_of") and hasattr(graph, "G_L"):
        Z = graph
        Lrows = _rows_from_csr(*Z._left_csr, Z.right, Z.n_left)
        Rrows = _rows_from_csr(*Z._right_csr, Z.left, Z.n_right)
        G = Z.G_L if side == "L" else Z.G_R
        rows, far = (Lrows, Rrows) if side == "L" else (Rrows, Lrows)
        e = G.group.identity
        reps = e * G.D + np.arange(G.D, dtype=np.int64)
        return SideView(rows, far, reps, G.act_faces, G.group.order)
    if hasattr(graph, "left_adj"):
        H = graph
        L, R = np.sort(H.left_adj, axis=1), np.sort(H.right_adj, axis=1)
        return SideView(L, R) if side == "L" else SideView(R, L)
    from scipy.sparse import csr_matrix

    B = csr_matrix(graph)
    if side == "R":
        B = csr_matrix(B.T)
    B.sort_indices()
    Bt = csr_matrix(B.T)
    Bt.sort_indices()
    return SideView(_rows_of_matrix(B), _rows_of_matrix(Bt))


def _rows_of_matrix(M) -> np.ndarray:
    # integer entries > 1 are parallel edges, expanded into separate slots
    data = M.data.astype(np.int64)
    cols = np.repeat(M.indices, data)
    owner = np.repeat(np.arange(M.shape[0]), np.diff(M.indptr))
    counts = np.bincount(owner, weights=data, minlength=M.shape[0]).astype(np.int64)
    ptr = np.concatenate([[0], np.cumsum(counts)])
    return _rows_from_csr(ptr, np.arange(len(cols)), cols, M.shape[0])


def evaluate_sets(rows: np.ndarray, sets: np.ndarray, j: int | None = None):
    """(distinct, unique[, j-heavy]) counts for each row of ``sets``."""
    sets = np.atleast_2d(np.asarray(sets, dtype=np.int64))
    m = len(sets)
    if m == 0 or sets.shape[1] == 0:
        z = np.zeros(m, dtype=np.int64)
        return (z, z, z) if j else (z, z)
    F = rows[sets].reshape(m, -1)
    F = np.sort(F, axis=1)
    first = np.ones(F.shape, dtype=bool)
    first[:, 1:] = F[:, 1:] != F[:, :-1]
    last = np.ones(F.shape, dtype=bool)
    last[:, :-1] = F[:, :-1] != F[:, 1:]
    distinct = first.sum(axis=1)
    unique = (first & last).sum(axis=1)
    if not j:
        return distinct, unique
    w = F.shape[1]
    heavy = np.zeros(m, dtype=np.int64)
    if j <= w:
        span = F[:, : w - j + 1] == F[:, j - 1:]
        heavy = (span & first[:, : w - j + 1]).sum(axis=1)
    return distinct, unique, heavy


def _evaluate_chunked(rows, sets_iter, j, chunk=200_000):
    best = None
    count = 0
    for sets in sets_iter:
        for lo in range(0, len(sets), chunk):
            part = sets[lo:lo + chunk]
            res = evaluate_sets(rows, part, j)
            count += len(part)
            best = _merge(best, part, res)
    return best, count


def _merge(best, sets, res):
    distinct, unique = res[0], res[1]
    a, b = int(np.argmin(distinct)), int(np.argmin(unique))
    cand = {"distinct": (int(distinct[a]), tuple(int(x) for x in sets[a])),
            "unique": (int(unique[b]), tuple(int(x) for x in sets[b])),
            "heavy": int(res[2].max()) if len(res) > 2 else None}
    if best is None:
        return cand
    for key in ("distinct", "unique"):
        if cand[key][0] < best[key][0]:
            best[key] = cand[key]
    if cand["heavy"] is not None:
        best["heavy"] = max(best["heavy"], cand["heavy"])
    return best


def _all_subsets(n, s, chunk=100_000):
    it = combinations(range(n), s)
    while True:
        block = np.array(list(_take(it, chunk)), dtype=np.int64)
        if len(block) == 0:
            return
        yield block.reshape(-1, s)


def _take(it, n):
    for _ in range(n):
        try:
            yield next(it)
        except StopIteration:
            return


def connected_sets(view: SideView, root: int, size: int) -> np.ndarray:
    """All sets of ``size`` vertices containing ``root`` that are connected
    through shared neighbours, as sorted rows."""
    level = np.array([[root]], dtype=np.int64)
    cache: dict[int, np.ndarray] = {}

    def n2(v):
        if v not in cache:
            cache[v] = view.n2(v)
        return cache[v]

    for _ in range(size - 1):
        grown = []
        for S in level:
            frontier = np.unique(np.concatenate([n2(int(v)) for v in S]))
            frontier = frontier[~np.isin(frontier, S)]
            if len(frontier) == 0:
                continue
            block = np.empty((len(frontier), len(S) + 1), dtype=np.int64)
            block[:, :-1] = S
            block[:, -1] = frontier
            grown.append(np.sort(block, axis=1))
        if not grown:
            return np.zeros((0, size), dtype=np.int64)
        level = np.unique(np.concatenate(grown), axis=0)
    return level


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in _partitions(n - p, p):
            yield (p,) + rest


def _realize(view, parts, witnesses, rng, tries=64):
    """Translate the witness sets apart; returns the union or None."""
    for _ in range(tries):
        pieces, used_far = [], set()
        ok = True
        for p in parts:
            gamma = int(rng.integers(view.group_order))
            W = np.asarray(view.translate(gamma, np.asarray(witnesses[p])), dtype=np.int64)
            far = set(view.rows[W].ravel().tolist())
            if far & used_far:
                ok = False
                break
            used_far |= far
            pieces.append(W)
        if ok:
            return np.sort(np.concatenate(pieces))
    return None


def _orbit_exhaustive(view, sizes, j, rng):
    """Exact minima via connected sets through orbit representatives."""
    top = max(sizes)
    conn = {}
    evaluated = {}
    for s in range(1, top + 1):
        blocks = [connected_sets(view, int(r), s) for r in view.reps]
        best, count = _evaluate_chunked(view.rows, blocks, j)
        conn[s], evaluated[s] = best, count
    out = {}
    for s in sizes:
        rec = {}
        for key in ("distinct", "unique"):
            best_val, best_parts = None, None
            for parts in _partitions(s):
                if any(conn[p] is None for p in parts):
                    continue
                val = sum(conn[p][key][0] for p in parts)
                if best_val is None or val < best_val:
                    best_val, best_parts = val, parts
            witness = conn[s][key][1] if best_parts == (s,) else None
            if witness is None:
                W = _realize(view, best_parts, {p: conn[p][key][1] for p in best_parts}, rng)
                if W is None:
                    raise RuntimeError(f"could not realise split {best_parts} of size {s}")
                got = evaluate_sets(view.rows, W[None, :])
                if int(got[0 if key == "distinct" else 1][0]) != best_val:
                    raise AssertionError("realised witness does not reach the split value")
                witness = tuple(int(x) for x in W)
            rec[key] = (best_val, witness)
        rec["heavy"] = None
        if j:
            rec["heavy"] = max(sum(conn[p]["heavy"] for p in parts) for parts in _partitions(s)
                               if all(conn[p] is not None for p in parts))
        out[s] = (rec, sum(evaluated[p] for p in range(1, s + 1)))
    return out


def _grow_random(view, size, rng):
    S = [int(rng.integers(view.n))]
    while len(S) < size:
        frontier = np.setdiff1d(view.n2(S[int(rng.integers(len(S)))]), S)
        if len(frontier) == 0:
            # no shared-neighbour extension: pad with a random vertex
            frontier = np.setdiff1d(rng.integers(view.n, size=8), S)
        S.append(int(rng.choice(frontier)))
    return np.sort(np.array(S, dtype=np.int64))


def _local_search(view, size, seed, samples, max_rounds, j):
    rng = np.random.default_rng(seed)
    starts = np.stack([_grow_random(view, size, rng) for _ in range(samples)])
    res = evaluate_sets(view.rows, starts, j)
    best = _merge(None, starts, res)
    count = len(starts)
    S = np.array(best["distinct"][1], dtype=np.int64)
    cur = best["distinct"][0]
    for _ in range(max_rounds):
        frontier = np.setdiff1d(np.unique(np.concatenate([view.n2(int(v)) for v in S])), S)
        if len(frontier) == 0:
            break
        cand = np.repeat(S[None, :], len(S) * len(frontier), axis=0)
        pos = np.repeat(np.arange(len(S)), len(frontier))
        cand[np.arange(len(cand)), pos] = np.tile(frontier, len(S))
        cand = np.sort(cand, axis=1)
        res = evaluate_sets(view.rows, cand, j)
        count += len(cand)
        best = _merge(best, cand, res)
        t = int(np.argmin(res[0]))
        if res[0][t] >= cur:
            break
        S, cur = cand[t], int(res[0][t])
    return best, count


def expansion_profile(graph, side: str = "L", sizes=(1, 2, 3), mode: str = "auto", seed: int = 0, *,
                      exhaustive_cap: int = 4, budget: float = 5e7, samples: int = 256,
                      restarts: int = 8, max_rounds: int = 50, j: int | None = None) -> ExpansionProfile:
    """Worst |N(S)| / (d |S|) and unique-neighbour ratio per set size.

    Sizes below ``exhaustive_cap`` are exact in "auto" mode when a full or
    orbit-reduced enumeration fits in ``budget`` evaluations. ``j`` adds the
    largest number of far vertices with at least j slots from S.
    """
    view = graph if isinstance(graph, SideView) else side_view(graph, side)
    sizes = sorted({int(s) for s in sizes})
    if sizes and sizes[0] < 1:
        raise ValueError("set sizes must be at least 1")
    prof = ExpansionProfile(side, view.d, view.n)
    rng = np.random.default_rng(seed)
    exact = [s for s in sizes if mode in ("auto", "exhaustive") and s < exhaustive_cap]
    if mode == "exhaustive":
        exact = sizes
    results = {}
    small = [s for s in exact if math.comb(view.n, s) <= budget]
    for s in small:
        best, count = _evaluate_chunked(view.rows, _all_subsets(view.n, s), j)
        results[s] = (best, count, "exhaustive")
    rest = [s for s in exact if s not in results]
    if rest:
        if view.reps is None:
            if mode == "exhaustive":
                raise ValueError(f"exhaustive enumeration of size {max(rest)} exceeds the budget")
            rest = []
        else:
            # rough count of connected sets per representative
            deg2 = len(view.n2(int(view.reps[0])))
            est = len(view.reps) * deg2 ** (max(rest) - 1)
            if est > budget:
                if mode == "exhaustive":
                    raise ValueError(f"about {est:.3g} connected sets exceed the budget {budget:.3g}")
                rest = [s for s in rest if len(view.reps) * deg2 ** (s - 1) <= budget]
            if rest:
                for s, (rec, count) in _orbit_exhaustive(view, rest, j, rng).items():
                    results[s] = (rec, count, "exhaustive")
    for s in sizes:
        if s in results:
            continue
        seeds = spawn(seed, restarts, key=[s * 1000 + t for t in range(restarts)])
        runs = map_items(lambda ss: _local_search(view, s, ss, samples, max_rounds, j), seeds)
        best, count = None, 0
        for b, c in runs:
            count += c
            if best is None:
                best = b
            else:
                for key in ("distinct", "unique"):
                    if b[key][0] < best[key][0]:
                        best[key] = b[key]
                if b["heavy"] is not None:
                    best["heavy"] = max(best["heavy"], b["heavy"])
        results[s] = (best, count, "local-search")
    for s in sizes:
        best, count, how = results[s]
        dist, wit = best["distinct"]
        uniq, _ = best["unique"]
        prof.records.append(SizeRecord(s, dist, dist / (view.d * s), uniq, uniq / (view.d * s),
                                       how, count, wit, best["heavy"]))
    return prof
