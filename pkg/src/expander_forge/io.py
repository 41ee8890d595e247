"""Edge-list files and JSON manifests.

Edge lists start with ``#expander-forge v1 <kind> <nL> <nR|0> <dL> <dR|0>``
followed by one ``u v`` line per edge (0-based decimals, left endpoint
first for bipartite kinds), sorted lexicographically, LF endings. Parallel
slot edges appear as repeated lines.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .verify.reports import clean

MAGIC = "#expander-forge"
FORMAT_VERSION = "v1"
MANIFEST_VERSION = "manifest_v1"
BIPARTITE_KINDS = {"basegraph", "gadget", "product", "product-dedup", "bipartite"}


@dataclass
class EdgeList:
    kind: str
    n_left: int
    n_right: int
    d_left: int
    d_right: int
    edges: np.ndarray = field(repr=False)

    @property
    def bipartite(self) -> bool:
        return self.n_right > 0 or self.kind in BIPARTITE_KINDS

    def header(self) -> str:
        return (f"{MAGIC} {FORMAT_VERSION} {self.kind} {self.n_left} {self.n_right} "
                f"{self.d_left} {self.d_right}\n")


def sort_edges(edges: np.ndarray) -> np.ndarray:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return edges[np.lexsort((edges[:, 1], edges[:, 0]))]


def _digits(x: np.ndarray):
    width = max(1, len(str(int(x.max())))) if len(x) else 1
    out = np.empty((len(x), width), dtype=np.uint8)
    tmp = x.copy()
    for p in range(width - 1, -1, -1):
        out[:, p] = tmp % 10
        tmp //= 10
    n_dig = np.ones(len(x), dtype=np.int64)
    bound = 10
    for t in range(1, width):
        n_dig += x >= bound
        bound *= 10
    return out + ord("0"), n_dig, width


def format_lines(edges: np.ndarray) -> bytes:
    """``u v\\n`` lines for an (m, 2) integer array, vectorized."""
    if len(edges) == 0:
        return b""
    u, v = edges[:, 0].astype(np.int64), edges[:, 1].astype(np.int64)
    du, nu, wu = _digits(u)
    dv, nv, wv = _digits(v)
    m = len(edges)
    buf = np.empty((m, wu + wv + 2), dtype=np.uint8)
    buf[:, :wu] = du
    buf[:, wu] = ord(" ")
    buf[:, wu + 1: wu + 1 + wv] = dv
    buf[:, -1] = ord("\n")
    keep = np.ones(buf.shape, dtype=bool)
    keep[:, :wu] = np.arange(wu)[None, :] >= (wu - nu)[:, None]
    keep[:, wu + 1: wu + 1 + wv] = np.arange(wv)[None, :] >= (wv - nv)[:, None]
    return buf[keep].tobytes()


def write_edgelist(path, graph: EdgeList, chunk: int = 1 << 20) -> str:
    """Write the file and return its sha256."""
    edges = sort_edges(graph.edges)
    h = hashlib.sha256()
    with open(path, "wb") as fh:
        head = graph.header().encode()
        fh.write(head)
        h.update(head)
        for lo in range(0, len(edges), chunk):
            data = format_lines(edges[lo:lo + chunk])
            fh.write(data)
            h.update(data)
    return h.hexdigest()


def read_edgelist(path) -> EdgeList:
    with open(path, "rb") as fh:
        head = fh.readline().decode().split()
        body = fh.read()
    if len(head) != 7 or head[0] != MAGIC or head[1] != FORMAT_VERSION:
        raise ValueError(f"{path}: not an expander-forge {FORMAT_VERSION} edge list")
    kind = head[2]
    nL, nR, dL, dR = (int(x) for x in head[3:])
    vals = np.array(body.split(), dtype=np.int64) if body.strip() else np.zeros(0, dtype=np.int64)
    if len(vals) % 2:
        raise ValueError(f"{path}: odd number of endpoints")
    return EdgeList(kind, nL, nR, dL, dR, vals.reshape(-1, 2))


def edgelist_matrix(g: EdgeList):
    """Sparse (bi)adjacency; slot multiplicities become entry values."""
    from scipy.sparse import coo_matrix

    e = g.edges
    if g.bipartite:
        shape = (g.n_left, g.n_right)
        return coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=shape).tocsr()
    n = g.n_left
    A = coo_matrix((np.ones(2 * len(e)), (np.r_[e[:, 0], e[:, 1]], np.r_[e[:, 1], e[:, 0]])),
                   shape=(n, n))
    return A.tocsr()


def dedupe(g: EdgeList) -> EdgeList:
    e = np.unique(sort_edges(g.edges), axis=0) if len(g.edges) else g.edges
    kind = "product-dedup" if g.kind == "product" else g.kind
    return EdgeList(kind, g.n_left, g.n_right, g.d_left, g.d_right, e.reshape(-1, 2))


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def canonical_json(obj) -> str:
    return json.dumps(clean(obj), sort_keys=True, indent=2) + "\n"


def input_digest(inputs: dict, seed) -> str:
    blob = json.dumps(clean({"inputs": inputs, "seed": seed}), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def write_manifest(path, command: str, inputs: dict, seed, artifacts: dict) -> dict:
    """Manifest beside an artifact: inputs, seed and content hashes.

    ``artifacts`` maps a file name to its sha256. No timestamps or absolute
    paths are recorded, so identical builds give identical manifests.
    """
    manifest = {
        "version": MANIFEST_VERSION,
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "input_digest": input_digest(inputs, seed),
        "artifacts": {os.path.basename(k): v for k, v in sorted(artifacts.items())},
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(canonical_json(manifest))
    return manifest


def write_json(path, obj) -> str:
    text = canonical_json(obj)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return hashlib.sha256(text.encode()).hexdigest()


def read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
