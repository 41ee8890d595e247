"""Dense finite groups addressed by integer index.

Everything above this layer (cubical complexes, incidence graphs, the line
product) only needs ``order``, ``identity``, vectorized ``mul`` and ``inv``
on index arrays. :class:`~expander_forge.psl2.PSL2Group` is the main
implementation; :class:`AbelianGroup` is a small commutative stand-in that
makes higher-dimensional complexes cheap enough to test exhaustively.
"""

from __future__ import annotations

from typing import Protocol

import numpy as np


class DenseGroup(Protocol):
    order: int
    identity: int

    def mul(self, x, y) -> np.ndarray: ...

    def inv(self, x) -> np.ndarray: ...


class AbelianGroup:
    """Z_{m_1} x ... x Z_{m_r}, indexed in mixed radix with the first factor slowest."""

    def __init__(self, moduli):
        self.moduli = tuple(int(m) for m in moduli)
        if not self.moduli or min(self.moduli) < 1:
            raise ValueError(f"bad moduli {moduli}")
        self.order = int(np.prod(self.moduli))
        self.identity = 0
        self._radix = np.array([int(np.prod(self.moduli[i + 1:])) for i in range(len(self.moduli))],
                               dtype=np.int64)
        self._mod = np.array(self.moduli, dtype=np.int64)

    def __len__(self) -> int:
        return self.order

    def vector(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self._radix) % self._mod

    def index(self, vec) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64) % self._mod
        return (v * self._radix).sum(axis=-1)

    def mul(self, x, y) -> np.ndarray:
        return self.index(self.vector(x) + self.vector(y))

    def inv(self, x) -> np.ndarray:
        return self.index(-self.vector(x))

    def __repr__(self) -> str:
        return "AbelianGroup(" + " x ".join(f"Z_{m}" for m in self.moduli) + ")"


def axis_generators(group: AbelianGroup, steps=(1,)) -> list[np.ndarray]:
    """A_i = {+-s e_i : s in steps} for every factor i, sorted by index.

    These commute trivially and have full product size whenever the factors
    are large enough for the +-s to stay distinct.
    """
    out = []
    r = len(group.moduli)
    for i in range(r):
        elems = set()
        for s in steps:
            for sign in (1, -1):
                v = np.zeros(r, dtype=np.int64)
                v[i] = sign * s
                elems.add(int(group.index(v)))
        out.append(np.array(sorted(elems), dtype=np.int64))
    return out
