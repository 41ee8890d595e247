import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from expander_forge.gadget import (GadgetCertificationError, certify, generate, generate_certified,
                                   uniform_special_sets)


@given(st.sampled_from([(20, 20, 4, 4), (30, 20, 4, 6), (12, 36, 6, 2), (40, 40, 5, 5)]),
       st.integers(0, 10 ** 6), st.sampled_from(["auto", "configuration"]))
def test_biregular_simple(params, seed, method):
    D_L, D_R, d_L, d_R = params
    H = generate(D_L, D_R, d_L, d_R, seed, method=method)
    assert H.degree_audit()
    B = H.biadjacency()
    assert (B.sum(axis=1) == d_L).all() and (B.sum(axis=0) == d_R).all()
    assert B.max() == 1


def test_deterministic_in_seed():
    a = generate(60, 60, 6, 6, 7)
    b = generate(60, 60, 6, 6, 7)
    c = generate(60, 60, 6, 6, 8)
    assert np.array_equal(a.edges, b.edges)
    assert not np.array_equal(a.edges, c.edges)


def test_parameter_errors():
    with pytest.raises(ValueError):
        generate(10, 10, 3, 4)
    with pytest.raises(ValueError):
        generate(4, 40, 50, 5)  # d_L > D_R
    with pytest.raises(ValueError):
        generate(20, 30, 3, 2, method="cyclic")


def test_swapped():
    H = generate(30, 20, 4, 6, 1)
    S = H.swapped()
    assert (S.D_L, S.D_R, S.d_L, S.d_R) == (20, 30, 6, 4)
    assert np.array_equal(S.biadjacency(), H.biadjacency().T)


def brute_min_neighbours(adj, size):
    return min(len(set(adj[list(A)].ravel())) for A in itertools.combinations(range(len(adj)), size))


def test_certificate_exhaustive_part_matches_brute_force():
    H = generate(24, 24, 4, 4, 3)
    rep = certify(H, caps={"delta": 0.5, "cap": 3, "samples": 0})
    for side, adj in (("L", H.left_adj), ("R", H.right_adj)):
        records = {r["size"]: r for r in rep["sides"][side]["lossless"]["records"]}
        for s in (1, 2, 3):
            assert records[s]["mode"] == "exhaustive"
            assert records[s]["min_neighbors"] == brute_min_neighbours(adj, s)


def test_certified_desk_gadget(desk):
    H, rep = desk.gadget
    assert rep["pass"] and H.degree_audit()
    assert set(rep["sides"]) == {"L", "R"}
    assert "spread" in rep["sides"]["L"]


def test_certification_failure_carries_best_candidate():
    # delta = 0 demands perfect expansion, impossible once two sets share a vertex
    with pytest.raises(GadgetCertificationError) as err:
        generate_certified({"D_L": 20, "D_R": 20, "d_L": 4, "d_R": 4}, 0, 2,
                           caps={"delta": 0.0, "cap": 3, "samples": 10})
    assert err.value.best is not None and not err.value.report["pass"]


def test_uniform_special_sets():
    tabs = uniform_special_sets(100, 10.0, 3, seed=0)
    assert len(tabs) == 3
    for t in tabs.values():
        assert len(t["labels"]) == 100 and t["s"] == 10.0
