import numpy as np
import pytest
from hypothesis import given, strategies as st

from expander_forge.basegraph import build_coded_incidence, trim_by_signature
from expander_forge.codes import hadamard
from expander_forge.cubical import Face, validate_generators
from expander_forge.groups import AbelianGroup, axis_generators


def test_desk_counts(desk):
    G = desk.graph_L
    assert (G.k, G.D) == (2, 60)
    assert G.n_faces == 730_800 and G.n_middle == 24_360
    assert desk.graph_R.n_faces == 730_800


def test_untrimmed_counts(desk):
    inc = build_coded_incidence(desk.complex_L, desk.code)
    assert inc.n_faces == 1_023_120 and inc.n_middle == 24_360
    assert inc.face_degree == 2 and inc.middle_degree == 84


def test_incidence_is_corner_map(desk):
    G, X = desk.graph_L, desk.complex_L
    rng = np.random.default_rng(0)
    for f in rng.integers(G.n_faces, size=50):
        b, i = divmod(int(f), G.D)
        face = Face(b, tuple(int(a) for a in G.signatures[i]))
        for c, w in enumerate(G.code.codewords):
            assert G.face_to_middle[f, c] == c * G.group.order + X.corner(face, w)


def test_biregular(desk):
    for G in (desk.graph_L, desk.graph_R):
        audit = G.biregularity_audit()
        assert audit["pass"], audit
        assert audit["middle_degree_min"] == audit["middle_degree_max"] == 60


def test_common_neighbourhoods_by_brute_force(desk):
    G = desk.graph_L
    n = G.group.order
    rng = np.random.default_rng(1)
    tables = G.special_sets
    for u in rng.integers(n, size=20):
        u = int(u)  # part 0
        mine = G.middle_to_face[u]
        # every face around u and its other middle vertex
        others = G.face_to_middle[mine, 1]
        for v in np.unique(others):
            common = np.sort(mine[others == v])
            assert np.array_equal(common, G.common_neighbors(u, int(v)))
            table = tables[(0, 1)]
            hits = [c for c, idx in enumerate(table.classes) if np.array_equal(np.sort(mine[idx]), common)]
            assert len(hits) == 1


def test_special_sets_partition(desk):
    for G in (desk.graph_L, desk.graph_R):
        for table in G.special_sets.values():
            cover = np.sort(np.concatenate(table.classes))
            assert np.array_equal(cover, np.arange(G.D))
        rep = G.special_set_report()
        assert rep["s"] > 0


def test_pair_audit(desk):
    assert desk.graph_L.pair_audit(300, seed=4)["pass"]


@given(st.integers(0, 12179), st.integers(0, 730_799))
def test_action_commutes_with_incidence(desk, gamma, f):
    G = desk.graph_L
    moved = G.act_faces(gamma, f)
    assert np.array_equal(G.face_to_middle[moved], G.act_middle(gamma, G.face_to_middle[f]))
    assert np.array_equal(G.face_signature(moved), G.face_signature(f))


def test_trim_bounds(desk):
    inc = build_coded_incidence(desk.complex_L, desk.code)
    with pytest.raises(ValueError):
        trim_by_signature(inc, 85)
    with pytest.raises(ValueError):
        trim_by_signature(inc, 0)
    with pytest.raises(ValueError):
        build_coded_incidence(desk.complex_L, hadamard(4))


def test_k4_abelian_structure():
    G = AbelianGroup((7, 7, 7, 7))
    X = validate_generators(G, axis_generators(G, (1,)))
    g = trim_by_signature(build_coded_incidence(X, hadamard(4)), 12)
    audit = g.biregularity_audit()
    assert audit["pass"]
    assert g.pair_audit(200, seed=0)["pass"]
