"""Nontrivial spectrum of regular and biregular graphs.

Square inputs are adjacency matrices: the all-ones vector (and, when the
graph is bipartite, the +-1 colouring vector) is projected out and the
largest remaining eigenvalue magnitude is returned. With ``bipartite=True``
the input is read as a biadjacency matrix B and the result is the second
singular value of B, found as the top eigenvalue of B^T B with the ones
vector removed on the right side.

The returned value is the Rayleigh quotient of the converged vector, which
lies in the deflated subspace, so it never exceeds the true value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.sparse import csr_matrix, issparse
from scipy.sparse.csgraph import breadth_first_order, connected_components
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

DENSE_LIMIT = 400


class SpectralConvergenceError(RuntimeError):
    pass


@dataclass
class SpectralEstimate:
    value: float
    residual: float
    iterations: int
    method: str = "lanczos"

    def __float__(self) -> float:
        return self.value


def as_matrix(graph):
    """Sparse matrix view of a graph-like object."""
    if hasattr(graph, "adjacency"):
        return csr_matrix(graph.adjacency(), dtype=float)
    if hasattr(graph, "biadjacency"):
        return csr_matrix(graph.biadjacency(), dtype=float)
    if issparse(graph):
        return csr_matrix(graph, dtype=float)
    return csr_matrix(np.asarray(graph, dtype=float))


def two_coloring(A) -> np.ndarray | None:
    """+-1 vector of a proper 2-colouring of a connected graph, else None."""
    A = csr_matrix(A)
    n = A.shape[0]
    if n == 0:
        return None
    order, pred = breadth_first_order(A, 0, directed=False)
    if len(order) < n:
        return None
    color = np.zeros(n, dtype=np.int8)
    color[order[0]] = 1
    for v in order[1:]:
        color[v] = -color[pred[v]]
    rows = np.repeat(np.arange(n), np.diff(A.indptr))
    if (color[rows] == color[A.indices]).any():
        return None
    return color.astype(float)


def _orthonormal(vectors, n):
    if not vectors:
        return np.zeros((n, 0))
    Q, _ = np.linalg.qr(np.stack(vectors, axis=1))
    return Q


def _start_vector(n: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal(n)


def _deflated_operator(M, Q):
    def project(x):
        return x - Q @ (Q.T @ x) if Q.shape[1] else x

    def mv(x):
        x = np.asarray(x).ravel()
        return project(M @ project(x))

    return LinearOperator(M.shape, matvec=mv, dtype=float), project


def _trivial_vectors(A):
    n = A.shape[0]
    deg = np.asarray(A.sum(axis=1)).ravel()
    if deg.size and np.allclose(deg, deg[0]):
        vecs = [np.ones(n)]
    else:
        # irregular: deflate the Perron vector
        _, v = eigsh(A, k=1, which="LA", v0=np.ones(n))
        vecs = [np.abs(v[:, 0])]
    sign = two_coloring(A)
    if sign is not None:
        vecs.append(vecs[0] * sign)
    return vecs


def second_eigenvalue(graph, tolerance: float = 1e-8, *, bipartite: bool = False,
                      method: str = "auto", max_iter: int = 20000, seed: int = 0) -> SpectralEstimate:
    """Largest nontrivial eigenvalue magnitude (or second singular value).

    ``method`` is "dense", "lanczos", "power" or "auto" (dense below
    DENSE_LIMIT vertices, Lanczos otherwise).
    """
    M = as_matrix(graph)
    if bipartite:
        rdeg = np.asarray(M.sum(axis=0)).ravel()
        if rdeg.size and not np.allclose(rdeg, rdeg[0]):
            raise ValueError("biadjacency is not right-regular")
        op = csr_matrix(M.T @ M)
        trivial = [np.ones(op.shape[0])]
    else:
        if M.shape[0] != M.shape[1]:
            raise ValueError("adjacency must be square; pass bipartite=True for a biadjacency")
        if M.shape[0] > 1 and connected_components(M, directed=False)[0] != 1:
            raise ValueError("graph is disconnected")
        op = M
        trivial = _trivial_vectors(M)
    n = op.shape[0]
    if n <= len(trivial):
        return SpectralEstimate(0.0, 0.0, 0, "dense")
    if method == "auto":
        method = "dense" if n <= DENSE_LIMIT else "lanczos"
    Q = _orthonormal(trivial, n)

    if method == "dense":
        comp = null_space(Q.T)
        w, V = np.linalg.eigh(comp.T @ op.toarray() @ comp)
        t = int(np.argmax(np.abs(w)))
        return _finish(op, comp @ V[:, t], bipartite, 1, "dense", None)
    if method == "lanczos":
        L, project = _deflated_operator(op, Q)
        v0 = project(_start_vector(n, seed))
        try:
            _, V = eigsh(L, k=1, which="LM", tol=tolerance, v0=v0, maxiter=max_iter)
        except ArpackNoConvergence as err:
            raise SpectralConvergenceError(f"Lanczos did not converge in {max_iter} iterations") from err
        return _finish(op, project(V[:, 0]), bipartite, -1, "lanczos", tolerance)
    if method == "power":
        return _power(op, Q, bipartite, tolerance, max_iter, seed)
    raise ValueError(f"unknown method {method!r}")


def _finish(op, v, bipartite, iters, method, tolerance) -> SpectralEstimate:
    v = v / np.linalg.norm(v)
    Av = op @ v
    rq = float(v @ Av)
    residual = float(np.linalg.norm(Av - rq * v)) / max(abs(rq), 1.0)
    if tolerance is not None and residual > max(tolerance, 1e-6) * 100:
        raise SpectralConvergenceError(f"residual {residual:.2e} above tolerance {tolerance:.1e}")
    value = math.sqrt(max(rq, 0.0)) if bipartite else abs(rq)
    return SpectralEstimate(value, residual, iters, method)


def _power(op, Q, bipartite, tolerance, max_iter, seed) -> SpectralEstimate:
    """Power iteration inside the deflated subspace.

    Adjacency inputs iterate with op^2 so that +-lambda pairs do not
    oscillate; B^T B is already positive semidefinite.
    """
    L, project = _deflated_operator(op, Q)
    step = L.matvec if bipartite else (lambda x: L.matvec(L.matvec(x)))
    v = project(_start_vector(op.shape[0], seed))
    v /= np.linalg.norm(v)
    prev = 0.0
    for it in range(1, max_iter + 1):
        w = step(v)
        rq = float(v @ w)
        norm = np.linalg.norm(w)
        if norm == 0:
            return SpectralEstimate(0.0, 0.0, it, "power")
        residual = float(np.linalg.norm(w - rq * v)) / max(rq, 1.0)
        v = w / norm
        if residual <= tolerance or abs(rq - prev) <= tolerance * tolerance * max(rq, 1.0):
            # rq is lambda^2 or sigma^2 either way
            return SpectralEstimate(math.sqrt(max(rq, 0.0)), residual, it, "power")
        prev = rq
    raise SpectralConvergenceError(f"power iteration did not converge in {max_iter} iterations")


def top_eigenvalue(graph, tolerance: float = 1e-10) -> float:
    """Largest adjacency eigenvalue of a symmetric nonnegative matrix."""
    M = as_matrix(graph)
    n = M.shape[0]
    if n == 0 or M.nnz == 0:
        return 0.0
    if n <= DENSE_LIMIT:
        return float(np.linalg.eigvalsh(M.toarray())[-1])
    w = eigsh(M, k=1, which="LA", tol=tolerance, v0=np.ones(n))[0]
    return float(w[0])
