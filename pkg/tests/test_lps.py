import math

import networkx as nx
import numpy as np
import pytest
from scipy.sparse.linalg import eigsh

from expander_forge.lps import (build_cayley, enumerate_A, generator_set,
                                verify_product_closure)
from expander_forge.numtheory import PrimeParams
from expander_forge.psl2 import PSL2Group, embed


@pytest.mark.parametrize("p", [5, 13, 17, 29])
def test_generator_count(p):
    A = enumerate_A(p)
    assert len(A) == p + 1
    assert all(a.norm == p and a.a > 0 and a.a % 2 == 1 for a in A)


def test_composite_generator_count():
    assert len(enumerate_A(65)) == 84


def test_generator_set_embeds_injectively(G29):
    for p in (5, 13):
        S = generator_set(p, 29)
        idx = S.indices(G29)
        assert len(set(idx.tolist())) == p + 1
        # closed under inverses, never the identity
        assert set(np.asarray(G29.inv(idx)).tolist()) == set(idx.tolist())
        assert G29.identity not in idx
        assert S.elements == tuple(sorted(S.elements, key=lambda g: g.key))


def test_cayley_graph(G29):
    X = build_cayley(PrimeParams((5,), 29), G29)
    A = X.adjacency()
    assert X.group_order == 12180 and X.degree == 6
    assert X.n_edges == 36540 == len(X.edges())
    assert (A != A.T).nnz == 0
    assert set(np.asarray(A.sum(axis=1)).ravel().tolist()) == {6}
    assert nx.is_connected(nx.from_scipy_sparse_array(A))


def test_cayley_spectrum_against_eigsh(G29):
    A = build_cayley(PrimeParams((5,), 29), G29).adjacency().astype(float)
    top = eigsh(A, k=3, which="LA", return_eigenvectors=False)
    bottom = eigsh(A, k=2, which="SA", return_eigenvectors=False)
    top = np.sort(top)[::-1]
    assert abs(top[0] - 6) < 1e-8
    lam2 = max(top[1], abs(bottom.min()))
    assert lam2 <= 2 * math.sqrt(5) + 1e-4
    assert lam2 == pytest.approx(4.442016, abs=1e-5)


def test_product_closure():
    rep = verify_product_closure([5, 13], 29)
    assert rep.ok and rep.product_size == rep.expected == 84


def test_nonresidue_prime_rejected():
    # 13 = 3 mod 5 is not a square, so A(13) has no image in PSL(2, 5)
    with pytest.raises(ValueError):
        generator_set(13, 5)


def test_embedding_respects_conjugation():
    q = 29
    for a in enumerate_A(13):
        assert embed(a.conjugate(), q) == embed(a, q).inverse()
