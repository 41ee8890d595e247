"""Coded incidence graphs and their signature-trimmed structured form.

Vertex numbering:

* faces: ``base * D + i`` where ``i`` is the rank of the face's signature
  among the retained ones (lexicographic order, first ``D`` kept);
* middle vertices M = G x C: ``c * |G| + g`` for codeword index ``c``
  (codeword-major, then canonical group order), so the part of ``u`` is
  ``u // |G|``.

``nbr_u(i)`` is the face through ``u`` whose signature has rank ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .codes import BinaryCode
from .cubical import CubicalComplex, mask_of


class StructureViolation(AssertionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class CodedIncidence:
    """Untrimmed incidence between X(k) and G x C."""

    complex: CubicalComplex
    code: BinaryCode

    @property
    def type_masks(self) -> list[int]:
        return [mask_of(w) for w in self.code.words]

    @property
    def n_faces(self) -> int:
        return self.complex.face_count

    @property
    def n_middle(self) -> int:
        return len(self.code) * self.complex.group.order

    @property
    def face_degree(self) -> int:
        return len(self.code)

    @property
    def middle_degree(self) -> int:
        return self.complex.n_sig


def build_coded_incidence(X: CubicalComplex, C: BinaryCode) -> CodedIncidence:
    if C.k != X.k:
        raise ValueError(f"code length {C.k} does not match complex dimension {X.k}")
    return CodedIncidence(X, C)


@dataclass
class SpecialSets:
    """Partition of [D] for one ordered codeword pair (a, b).

    ``labels[i]`` is the class of index i; class t collects the indices whose
    faces reach type b at offset ``partner[t]`` from u, so the matching
    vertex of M_b is ``(g * partner[t], b)`` for u = (g, a).
    """

    a: int
    b: int
    labels: np.ndarray = field(repr=False)
    partner: np.ndarray = field(repr=False)

    @property
    def r(self) -> int:
        return len(self.partner)

    @property
    def classes(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        cuts = np.cumsum(np.bincount(self.labels, minlength=self.r))[:-1]
        return np.split(order, cuts)

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.r)


class StructuredBipartiteGraph:
    """(k, D)-biregular graph between trimmed faces V and M = G x C."""

    def __init__(self, incidence: CodedIncidence, D: int):
        X = incidence.complex
        if not 1 <= D <= X.n_sig:
            raise ValueError(f"D_target={D} must lie in [1, {X.n_sig}]")
        self.incidence = incidence
        self.complex = X
        self.code = incidence.code
        self.group = X.group
        self.D = D
        self.k = len(self.code)
        self.masks = incidence.type_masks
        self._special: dict | None = None

    def __repr__(self) -> str:
        return (f"StructuredBipartiteGraph(k={self.k}, D={self.D}, |V|={self.n_faces}, "
                f"|M|={self.n_middle})")

    @property
    def n_faces(self) -> int:
        return self.group.order * self.D

    @property
    def n_middle(self) -> int:
        return self.k * self.group.order

    @property
    def signatures(self) -> np.ndarray:
        return self.complex.signatures[: self.D]

    def part(self, u):
        return np.asarray(u) // self.group.order

    def middle(self, c, g):
        return np.asarray(c) * self.group.order + np.asarray(g)

    @cached_property
    def face_to_middle(self) -> np.ndarray:
        """(|V|, k): column c holds the unique neighbour of each face in M_c."""
        n = self.group.order
        base = np.arange(n, dtype=np.int64)[:, None]
        out = np.empty((n * self.D, self.k), dtype=np.int64)
        for c, m in enumerate(self.masks):
            g = np.asarray(self.group.mul(base, self.complex.corner_offsets[m, : self.D][None, :]))
            out[:, c] = c * n + g.ravel()
        return out

    @cached_property
    def middle_to_face(self) -> np.ndarray:
        """(|M|, D): row u is nbr_u(0..D-1)."""
        n = self.group.order
        g = np.arange(n, dtype=np.int64)[:, None]
        rows = []
        for m in self.masks:
            base = np.asarray(self.group.mul(g, self.complex.inverse_offsets[m, : self.D][None, :]))
            rows.append(base * self.D + np.arange(self.D))
        return np.concatenate(rows)

    def nbr(self, u: int, i=None):
        row = self.middle_to_face[u]
        return row if i is None else row[i]

    def neighbors_of_face(self, f) -> np.ndarray:
        return self.face_to_middle[f]

    # group action ---------------------------------------------------------

    def _translate(self, gamma, g):
        g = np.asarray(g)
        if np.ndim(gamma) == 0 and g.size > self.group.order:
            # one left translation applied to many elements: go through a permutation
            perm = np.asarray(self.group.mul(int(gamma), np.arange(self.group.order)))
            return perm[g]
        return np.asarray(self.group.mul(gamma, g))

    def act_faces(self, gamma: int, faces):
        base, i = np.divmod(np.asarray(faces), self.D)
        return self._translate(gamma, base) * self.D + i

    def act_middle(self, gamma: int, us):
        c, g = np.divmod(np.asarray(us), self.group.order)
        return c * self.group.order + self._translate(gamma, g)

    def face_signature(self, f) -> np.ndarray:
        return self.signatures[np.asarray(f) % self.D]

    # special sets ---------------------------------------------------------

    @property
    def special_sets(self) -> dict:
        if self._special is None:
            self._special = compute_special_sets(self, verify_samples=0)
        return self._special

    def measured_s(self) -> float:
        """s placing every class size in [D/(2s), 2D/s], if any such s exists.

        Uses D / sqrt(min * max), the midpoint of the admissible range on a
        log scale; the window is then satisfied iff max <= 4 min.
        """
        sizes = np.concatenate([t.sizes for t in self.special_sets.values()])
        return self.D / math.sqrt(float(sizes.min()) * float(sizes.max()))

    def special_set_report(self) -> dict:
        s = self.measured_s()
        sizes = np.concatenate([t.sizes for t in self.special_sets.values()])
        total = int(sum(t.r for t in self.special_sets.values()))
        Dbar = self.complex.n_sig
        return {
            "s": s,
            "min_size_ratio": float(sizes.min() * s / self.D),
            "max_size_ratio": float(sizes.max() * s / self.D),
            "window_holds": bool(sizes.min() >= self.D / (2 * s) - 1e-9 and sizes.max() <= 2 * self.D / s + 1e-9),
            "total_special_sets": total,
            "count_bound": float(self.k ** 2 * math.sqrt(Dbar)),
            "count_within_bound": bool(total <= self.k ** 2 * math.sqrt(Dbar)),
        }

    def gadget_tables(self) -> dict:
        s = self.measured_s()
        return {f"{a}-{b}": {"labels": t.labels, "s": s} for (a, b), t in self.special_sets.items()}

    # audits ---------------------------------------------------------------

    def biregularity_audit(self) -> dict:
        f2m = self.face_to_middle
        deg_m = np.bincount(f2m.ravel(), minlength=self.n_middle)
        parts_ok = bool((self.part(f2m) == np.arange(self.k)[None, :]).all())
        m2f = self.middle_to_face
        # nbr_u must be injective and agree with face_to_middle
        inj = bool((np.diff(np.sort(m2f, axis=1), axis=1) > 0).all())
        back = f2m[m2f, np.arange(self.n_middle)[:, None] // self.group.order]
        consistent = bool((back == np.arange(self.n_middle)[:, None]).all())
        return {
            "face_degree": self.k,
            "middle_degree_min": int(deg_m.min()),
            "middle_degree_max": int(deg_m.max()),
            "one_neighbor_per_part": parts_ok,
            "nbr_injective": inj,
            "nbr_consistent": consistent,
            "pass": bool(deg_m.min() == deg_m.max() == self.D and parts_ok and inj and consistent),
        }

    def common_neighbors(self, u: int, v: int) -> np.ndarray:
        return np.intersect1d(self.middle_to_face[u], self.middle_to_face[v])

    def pair_audit(self, pairs: int = 1000, seed: int = 0) -> dict:
        """Check N(u) & N(v) against the special sets on sampled cross-part pairs.

        Half the pairs use a partner vertex of u (non-empty intersection),
        half a uniformly random vertex of another part.
        """
        rng = np.random.default_rng(seed)
        n = self.group.order
        tables = self.special_sets
        nonempty = failures = 0
        witness = None
        for t in range(pairs):
            a, b = rng.choice(self.k, 2, replace=False)
            g = int(rng.integers(n))
            u = a * n + g
            table = tables[(int(a), int(b))]
            if t % 2 == 0:
                cls = int(rng.integers(table.r))
                v = b * n + int(self.group.mul(g, table.partner[cls]))
            else:
                v = b * n + int(rng.integers(n))
            common = self.common_neighbors(u, v)
            nbrs = self.middle_to_face[u]
            matches = [c for c, idx in enumerate(table.classes)
                       if np.array_equal(np.sort(nbrs[idx]), common)]
            ok = len(common) == 0 or len(matches) == 1
            nonempty += len(common) > 0
            if not ok:
                failures += 1
                witness = witness or (int(u), int(v))
        covered = all(np.array_equal(np.sort(np.concatenate(t.classes)), np.arange(self.D))
                      for t in tables.values())
        return {"pairs": pairs, "nonempty": nonempty, "failures": failures, "witness": witness,
                "partition": bool(covered), "pass": failures == 0 and covered}


def trim_by_signature(graph: CodedIncidence, D_target: int) -> StructuredBipartiteGraph:
    return StructuredBipartiteGraph(graph, D_target)


def compute_special_sets(g: StructuredBipartiteGraph, verify_samples: int = 64,
                         seed: int = 0) -> dict:
    """Special-set tables for every ordered pair of distinct codewords.

    Index i (a retained signature) is classed by the relative offset
    w_a(sig_i)^-1 w_b(sig_i): the face nbr_u(i) of u = (h, a) meets M_b at
    h times that offset. Classes are formed on the full signature set and
    then cut down to the retained ones; every class of the full set has
    size prod_{j not in supp(a xor b)} |A_j|. ``verify_samples`` random u per
    pair are checked against direct neighbourhood intersections.
    """
    X = g.complex
    inv_off, off = X.inverse_offsets, X.corner_offsets
    rng = np.random.default_rng(seed)
    tables = {}
    for a in range(g.k):
        for b in range(g.k):
            if a == b:
                continue
            ma, mb = g.masks[a], g.masks[b]
            rel_full = np.asarray(X.group.mul(inv_off[ma], off[mb]))
            vals, full_labels, full_sizes = np.unique(rel_full, return_inverse=True, return_counts=True)
            expect = math.prod(X.sizes[j] for j in range(X.k) if not (ma ^ mb) >> j & 1)
            if not (full_sizes == expect).all():
                raise StructureViolation(f"class sizes for ({a},{b}) differ from {expect}",
                                         (a, b, full_sizes.tolist()))
            kept = full_labels[: g.D]
            used, labels = np.unique(kept, return_inverse=True)
            # classes are numbered by first retained index
            first = np.array([np.flatnonzero(labels == t)[0] for t in range(len(used))])
            order = np.argsort(first)
            relabel = np.empty_like(order)
            relabel[order] = np.arange(len(order))
            labels = relabel[labels]
            partner = vals[used][order]
            tables[(a, b)] = SpecialSets(a, b, labels.astype(np.int64), partner.astype(np.int64))
    if verify_samples:
        n = g.group.order
        for (a, b), table in tables.items():
            for g0 in rng.integers(n, size=verify_samples):
                u = a * n + int(g0)
                for cls, idx in enumerate(table.classes):
                    v = b * n + int(g.group.mul(int(g0), table.partner[cls]))
                    common = g.common_neighbors(u, v)
                    if not np.array_equal(np.sort(g.middle_to_face[u][idx]), common):
                        raise StructureViolation("special set does not match a common neighbourhood",
                                                 (u, v, cls))
    g._special = tables
    return tables
