import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.sparse import csr_matrix

from expander_forge.lps import build_cayley
from expander_forge.numtheory import PrimeParams
from expander_forge.psl2 import PSL2Group
from expander_forge.verify import SpectralConvergenceError, second_eigenvalue, top_eigenvalue


def dense_lambda2(A):
    ev = np.linalg.eigvalsh(np.asarray(A, dtype=float))
    return max(ev[-2], -ev[0]) if not nx.is_bipartite(nx.from_numpy_array(A)) else ev[-2]


@pytest.mark.parametrize("G,val", [(nx.complete_graph(4), 1.0), (nx.cycle_graph(6), 1.0),
                                   (nx.cycle_graph(7), 2 * math.cos(math.pi / 7)),
                                   (nx.petersen_graph(), 2.0), (nx.complete_bipartite_graph(3, 3), 0.0)])
def test_known_spectra(G, val):
    A = nx.to_scipy_sparse_array(G, format="csr")
    for method in ("dense", "lanczos", "power"):
        assert second_eigenvalue(A, 1e-9, method=method).value == pytest.approx(val, abs=1e-6)


@given(st.integers(3, 6), st.integers(0, 10 ** 6))
def test_random_regular_against_numpy(d, seed):
    G = nx.random_regular_graph(d, 40, seed=seed)
    A = nx.to_numpy_array(G)
    est = second_eigenvalue(csr_matrix(A), 1e-9, method="lanczos")
    assert est.value == pytest.approx(dense_lambda2(A), abs=1e-6)
    assert est.residual < 1e-4


def test_irregular_biadjacency_rejected():
    B = np.ones((3, 4))
    B[0, 0] = 0
    with pytest.raises(ValueError):
        second_eigenvalue(B, bipartite=True)


def test_biregular_bipartite_against_svd():
    from expander_forge.gadget import generate

    H = generate(30, 20, 4, 6, 5)
    B = H.biadjacency().astype(float)
    sv = np.linalg.svd(B, compute_uv=False)
    for method in ("dense", "lanczos", "power"):
        est = second_eigenvalue(B, 1e-10, bipartite=True, method=method)
        assert est.value == pytest.approx(sv[1], abs=1e-6)


def test_lps_13_17_against_dense():
    G = PSL2Group(17)
    A = build_cayley(PrimeParams((13,), 17), G).adjacency()
    ev = np.linalg.eigvalsh(A.toarray().astype(float))
    want = max(ev[-2], -ev[0])
    assert second_eigenvalue(A, 1e-9).value == pytest.approx(want, abs=1e-6)
    assert want <= 2 * math.sqrt(13)


def test_top_eigenvalue():
    A = nx.to_scipy_sparse_array(nx.star_graph(4), format="csr")
    assert top_eigenvalue(A) == pytest.approx(2.0)


def test_power_iteration_can_fail_loudly():
    A = nx.to_scipy_sparse_array(nx.cycle_graph(200), format="csr")
    with pytest.raises(SpectralConvergenceError):
        second_eigenvalue(A, 1e-12, method="power", max_iter=3)
