"""Skeleton graph on M and the induced-subgraph eigenvalue check."""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from ..basegraph import StructuredBipartiteGraph
from .reports import make_report
from .spectral import second_eigenvalue, top_eigenvalue


def skeleton_graph(G: StructuredBipartiteGraph) -> csr_matrix:
    """u ~ v iff they share a face, read off the special-set partners.

    u = (g, a) meets (g * partner, b) for each class of the (a, b) table.
    """
    n = G.group.order
    g = np.arange(n, dtype=np.int64)
    rows, cols = [], []
    for (a, b), table in G.special_sets.items():
        v = np.asarray(G.group.mul(g[:, None], table.partner[None, :]))
        rows.append(np.repeat(a * n + g, table.r))
        cols.append((b * n + v).ravel())
    r, c = np.concatenate(rows), np.concatenate(cols)
    A = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(G.n_middle, G.n_middle)).tocsr()
    A.sum_duplicates()
    A.data[:] = 1
    return A


def skeleton_from_faces(G: StructuredBipartiteGraph) -> csr_matrix:
    """Same graph built directly from face_to_middle (used as a cross-check)."""
    f2m = G.face_to_middle
    rows, cols = [], []
    for a in range(G.k):
        for b in range(G.k):
            if a != b:
                rows.append(f2m[:, a])
                cols.append(f2m[:, b])
    r, c = np.concatenate(rows), np.concatenate(cols)
    A = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(G.n_middle, G.n_middle)).tocsr()
    A.sum_duplicates()
    A.data[:] = 1
    return A


def skeleton_eigen_check(G: StructuredBipartiteGraph, U, delta: float | None = None, *,
                         ambient: float | None = None, skeleton=None, tolerance: float = 1e-8) -> dict:
    """Top eigenvalue of the skeleton induced on U against lambda + delta * d.

    ``delta`` defaults to |U| / |M|; ``ambient`` (the largest nontrivial
    eigenvalue of the whole skeleton) is computed when not supplied.
    """
    A = skeleton if skeleton is not None else skeleton_graph(G)
    U = np.unique(np.asarray(U, dtype=np.int64))
    deg = np.diff(A.indptr)
    d = int(deg.max()) if len(deg) else 0
    if ambient is None:
        ambient = second_eigenvalue(A, tolerance).value
    if delta is None:
        delta = len(U) / A.shape[0]
    sub = A[U][:, U]
    top = top_eigenvalue(sub) if len(U) else 0.0
    bound = ambient + delta * d
    return make_report(
        "skeleton_eigen",
        {"U_size": len(U), "delta": delta, "n_middle": A.shape[0]},
        {"induced_top": top, "ambient_lambda": ambient, "skeleton_degree": d,
         "regular": bool(deg.min() == deg.max()) if len(deg) else True,
         "induced_edges": int(sub.nnz // 2)},
        bound, bool(top <= bound + 1e-6) and len(U) <= delta * A.shape[0] + 1e-9,
    )
