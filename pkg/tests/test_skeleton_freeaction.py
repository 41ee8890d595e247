import numpy as np
import pytest

from expander_forge.verify import (free_action_audit, skeleton_eigen_check, skeleton_from_faces,
                                   skeleton_graph)


def test_skeleton_sources_agree(desk):
    for G in (desk.graph_L, desk.graph_R):
        A = skeleton_graph(G)
        assert (A != skeleton_from_faces(G)).nnz == 0
        assert (A != A.T).nnz == 0


def test_skeleton_eigen_check(desk):
    G = desk.graph_L
    A = skeleton_graph(G)
    rng = np.random.default_rng(0)
    U = rng.choice(G.n_middle, size=243, replace=False)  # floor(0.01 * 24360)
    rep = skeleton_eigen_check(G, U, 0.01, skeleton=A)
    assert rep["verdict"] == "pass"
    assert rep["measured"]["regular"]
    # too many vertices for the stated delta
    big = rng.choice(G.n_middle, size=300, replace=False)
    assert skeleton_eigen_check(G, big, 0.01, skeleton=A, ambient=rep["measured"]["ambient_lambda"])["verdict"] == "fail"


def test_free_action_small(Z):
    rep = free_action_audit(Z, samples=5, seed=3, faces_per_gamma=4)
    m = rep["measured"]
    assert rep["verdict"] == "pass"
    assert m["fixed_vertices"] == 0 and m["slot_bijection_passes"] == 5
    assert m["c_measured"] == pytest.approx(12180 / 1_461_600)
