"""Bounded out-degree orientations by minimum-degree peeling.

Every subgraph of a graph whose adjacency matrix has top eigenvalue lam has
minimum degree at most lam (the average degree is a Rayleigh quotient).
Peeling a minimum-degree vertex and pointing its remaining edges away from
it therefore never produces out-degree above floor(lam).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix, triu

from .spectral import as_matrix, top_eigenvalue


class OrientationError(ValueError):
    """A peeled subgraph has minimum degree above the bound.

    ``witness`` lists the vertices of that subgraph; its average degree
    exceeds the bound, so so does its top eigenvalue.
    """

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


@dataclass
class Orientation:
    arcs: np.ndarray = field(repr=False)  # (m, 2) tail -> head
    order: np.ndarray = field(repr=False)  # peeling order
    out_degree: np.ndarray = field(repr=False)
    bound: float = 0.0

    @property
    def max_out_degree(self) -> int:
        return int(self.out_degree.max()) if len(self.out_degree) else 0


def _simple(graph) -> csr_matrix:
    A = as_matrix(graph)
    if A.shape[0] != A.shape[1]:
        raise ValueError("orientation needs a square adjacency matrix")
    A = ((A + A.T) > 0).astype(np.int8).tocsr()
    A.setdiag(0)
    A.eliminate_zeros()
    return A


def orient_bounded_outdegree(graph, lambda_bound: float | None = None) -> Orientation:
    A = _simple(graph)
    n = A.shape[0]
    if lambda_bound is None:
        lambda_bound = top_eigenvalue(A)
    cap = math.floor(lambda_bound + 1e-9)
    deg = np.diff(A.indptr).astype(np.int64)
    alive = np.ones(n, dtype=bool)
    heap = [(int(d), v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    order = []
    tails, heads = [], []
    while heap:
        d, v = heapq.heappop(heap)
        if not alive[v] or d != deg[v]:
            continue
        if d > cap:
            raise OrientationError(f"subgraph on {int(alive.sum())} vertices has minimum degree {d} "
                                   f"> {lambda_bound:.4f}", np.flatnonzero(alive))
        alive[v] = False
        order.append(v)
        nb = A.indices[A.indptr[v]:A.indptr[v + 1]]
        nb = nb[alive[nb]]
        tails.extend([v] * len(nb))
        heads.extend(nb.tolist())
        for w in nb:
            deg[w] -= 1
            heapq.heappush(heap, (int(deg[w]), int(w)))
    arcs = np.array([tails, heads], dtype=np.int64).T.reshape(-1, 2)
    out = np.bincount(arcs[:, 0], minlength=n) if len(arcs) else np.zeros(n, dtype=np.int64)
    if len(arcs) != triu(A, 1).nnz:
        raise AssertionError("orientation lost edges")
    if out.size and out.max() > lambda_bound + 1e-9:
        raise AssertionError("out-degree above bound")
    return Orientation(arcs, np.array(order, dtype=np.int64), out, float(lambda_bound))
