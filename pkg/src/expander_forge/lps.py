"""LPS generator sets and Cayley graphs over PSL(2, F_q)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .numtheory import PrimeParams, four_square_representations
from .psl2 import PSL2Element, PSL2Group, Quaternion, embed


def enumerate_A(n: int) -> list[Quaternion]:
    """Norm-n quaternions with odd trace, one per sign class (a > 0), lex order."""
    if n % 2 == 0 or n < 1:
        raise ValueError(f"n must be odd and positive, got {n}")
    reps = four_square_representations(n)
    keep = reps[(reps[:, 0] > 0) & (reps[:, 0] % 2 == 1)]
    return [Quaternion(*map(int, row)) for row in keep]


@dataclass(frozen=True)
class GeneratorSet:
    p: int
    q: int
    elements: tuple[PSL2Element, ...]
    source_quaternions: tuple[Quaternion, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def indices(self, group: PSL2Group) -> np.ndarray:
        return np.array(sorted(group.index(g) for g in self.elements), dtype=np.int64)


def generator_set(p: int, q: int) -> GeneratorSet:
    """Embedded image of A(p) in PSL(2, F_q), sorted by canonical key.

    Raises if the image is smaller than |A(p)| (two quaternions became
    scalar multiples mod q) or is not closed under inverses.
    """
    quats = enumerate_A(p)
    images = [embed(a, q) for a in quats]
    pairs = sorted(zip(images, quats), key=lambda t: t[0].key)
    elems = tuple(g for g, _ in pairs)
    if len(set(elems)) != len(quats):
        raise ValueError(f"A({p}) does not embed injectively mod {q}")
    if {g.inverse() for g in elems} != set(elems):
        raise ValueError(f"embedded A({p}) mod {q} is not closed under inverses")
    return GeneratorSet(p, q, elems, tuple(a for _, a in pairs))


@dataclass
class CayleyGraph:
    """Right-multiplication Cayley graph: g ~ g*a for a in the generator set."""

    group: PSL2Group
    generators: np.ndarray
    neighbors: np.ndarray = field(repr=False)

    @property
    def group_order(self) -> int:
        return self.group.order

    @property
    def degree(self) -> int:
        return self.neighbors.shape[1]

    @property
    def n_edges(self) -> int:
        return self.group.order * self.degree // 2

    def adjacency(self) -> csr_matrix:
        n, d = self.neighbors.shape
        indptr = np.arange(0, n * d + 1, d)
        return csr_matrix((np.ones(n * d), self.neighbors.ravel(), indptr), shape=(n, n))

    def edges(self) -> np.ndarray:
        """Each undirected edge once as (u, v) with u < v, lex sorted."""
        n, d = self.neighbors.shape
        u = np.repeat(np.arange(n), d)
        v = self.neighbors.ravel()
        keep = u < v
        e = np.stack([u[keep], v[keep]], axis=1)
        return e[np.lexsort((e[:, 1], e[:, 0]))]


def cayley_neighbors(group, gens: np.ndarray) -> np.ndarray:
    """(|G|, |gens|) array of g*a, each row sorted."""
    nb = group.mul(np.arange(group.order)[:, None], np.asarray(gens)[None, :])
    nb.sort(axis=1)
    return nb


def build_cayley(params: PrimeParams, group: PSL2Group | None = None) -> CayleyGraph:
    if params.k != 1:
        raise ValueError("build_cayley takes a single prime p")
    (p,) = params.p_list
    group = group or PSL2Group(params.q)
    gens = generator_set(p, params.q).indices(group)
    if group.identity in gens:
        raise ValueError(f"A({p}) contains the identity mod {params.q}: self-loops")
    graph = CayleyGraph(group, gens, cayley_neighbors(group, gens))
    ncomp, _ = connected_components(graph.adjacency(), directed=False)
    if ncomp != 1:
        raise ValueError(f"X({p};{params.q}) has {ncomp} components")
    return graph


@dataclass
class ClosureReport:
    ok: bool
    product_size: int
    expected: int
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_product_closure(p_list, q: int) -> ClosureReport:
    """Check Ã(p_1)...Ã(p_k) = Ã(p_1...p_k) with all products distinct.

    Uses scalar group elements, so q can be far larger than what a dense
    :class:`PSL2Group` table allows.
    """
    p_list = list(p_list)
    sets = [generator_set(p, q).elements for p in p_list]
    expected = math.prod(p + 1 for p in p_list)
    seen: dict[PSL2Element, tuple] = {}
    for combo in _product_tuples(sets):
        g = reduce(lambda x, y: x * y, combo)
        if g in seen:
            return ClosureReport(False, len(seen), expected, (seen[g], combo))
        seen[g] = combo
    target = {embed(a, q) for a in enumerate_A(math.prod(p_list))}
    extra = set(seen) - target
    if extra or len(target) != len(seen):
        g = next(iter(extra)) if extra else next(iter(target - set(seen)))
        return ClosureReport(False, len(seen), expected, (g,))
    return ClosureReport(True, len(seen), expected)


def _product_tuples(sets):
    if not sets:
        yield ()
        return
    for head in sets[0]:
        for rest in _product_tuples(sets[1:]):
            yield (head,) + rest
