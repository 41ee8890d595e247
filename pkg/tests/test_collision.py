import numpy as np
from hypothesis import given, strategies as st

from expander_forge.checks import colliding_set
from expander_forge.verify import collision_analysis, collision_graph, red_edges
from oracles import recount


def test_collision_graph_counts():
    red = np.array([[0, 5], [1, 5], [2, 5], [0, 6], [3, 7]])
    C = collision_graph(red, keep_witnesses=True)
    # r = 5 is reached from u = 0, 1, 2: three pairs
    assert C.n_edges == 3 and C.n_simple_edges == 3
    assert C.witnesses[(0, 1)] == [5]
    assert C.simple_adjacency().shape == (4, 4)


@given(st.integers(0, 10 ** 6), st.integers(1, 8))
def test_identity_and_recount(Z, seed, size):
    rng = np.random.default_rng(seed)
    S = colliding_set(Z, size, rng)
    rep = collision_analysis(Z, S)
    m = rep["measured"]
    ref = recount(Z.G_L, Z.G_R, Z.H, S)
    assert (m["N_Z_S"], m["e_RED"], m["e_C"]) == (ref["N"], ref["e_RED"], ref["e_C"])
    assert m["N_Z_S"] >= m["e_RED"] - m["e_C"]
    assert rep["verdict"] == "pass"


def test_collisions_occur(Z):
    rng = np.random.default_rng(0)
    S = colliding_set(Z, 6, rng)
    m = collision_analysis(Z, S)["measured"]
    assert m["e_C"] > 0 and m["max_red_degree"] == 2
    assert m["equality_holds"]
    assert "C_simple_max_out_degree" in m


def test_red_edges_distinct(Z):
    red = red_edges(Z, [0, 1, 2])
    assert len(np.unique(red, axis=0)) == len(red)


def test_threshold_splits_U(Z):
    S = np.arange(60)  # all faces on one base share their middle vertices
    m = collision_analysis(Z, S, degree_threshold=2)["measured"]
    assert m["U_h_size"] + m["U_l_size"] == m["U_size"]
    assert m["U_h_size"] >= 1
