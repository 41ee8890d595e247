import hashlib

import numpy as np
import pytest
from hypothesis import given, strategies as st

from expander_forge import io

edges = st.lists(st.tuples(st.integers(0, 10 ** 7), st.integers(0, 10 ** 7)), max_size=60)


def test_format_lines_matches_python():
    e = np.array([[0, 0], [7, 123], [10, 9], [999999, 1]])
    want = "".join(f"{u} {v}\n" for u, v in e.tolist()).encode()
    assert io.format_lines(e) == want


@given(edges)
def test_roundtrip(tmp_path_factory, pairs):
    path = tmp_path_factory.mktemp("rt") / "g.edges"
    n = 10 ** 7 + 1
    g = io.EdgeList("bipartite", n, n, 3, 3, np.array(pairs, dtype=np.int64).reshape(-1, 2))
    digest = io.write_edgelist(path, g, chunk=7)
    assert digest == io.sha256_file(path)
    back = io.read_edgelist(path)
    assert (back.kind, back.n_left, back.n_right, back.d_left, back.d_right) == ("bipartite", n, n, 3, 3)
    assert np.array_equal(back.edges, io.sort_edges(g.edges))
    text = path.read_bytes().decode()
    body = text.splitlines()[1:]
    assert body == sorted(body, key=lambda s: tuple(map(int, s.split())))
    assert "\r" not in text


def test_empty_dedupe_is_header_only(tmp_path):
    g = io.EdgeList("product", 0, 0, 0, 0, np.zeros((0, 2), dtype=np.int64))
    path = tmp_path / "e.edges"
    io.write_edgelist(path, io.dedupe(g))
    assert path.read_text() == "#expander-forge v1 product-dedup 0 0 0 0\n"
    assert len(io.read_edgelist(path).edges) == 0


def test_dedupe_and_matrix():
    g = io.EdgeList("product", 3, 2, 2, 3, np.array([[2, 1], [0, 0], [2, 1], [1, 1]]))
    d = io.dedupe(g)
    assert d.kind == "product-dedup" and d.edges.tolist() == [[0, 0], [1, 1], [2, 1]]
    M = io.edgelist_matrix(g)
    assert M[2, 1] == 2 and M.shape == (3, 2)
    c = io.EdgeList("cayley", 3, 0, 2, 0, np.array([[0, 1], [1, 2], [0, 2]]))
    A = io.edgelist_matrix(c)
    assert (A != A.T).nnz == 0 and A.sum() == 6


def test_bad_header(tmp_path):
    path = tmp_path / "bad.edges"
    path.write_text("# something else\n1 2\n")
    with pytest.raises(ValueError):
        io.read_edgelist(path)


def test_manifest(tmp_path):
    a = io.write_manifest(tmp_path / "m1.json", "lps", {"p": 5, "q": 29}, None, {"/x/y/a.edges": "00"})
    b = io.write_manifest(tmp_path / "m2.json", "lps", {"p": 5, "q": 29}, None, {"/z/a.edges": "00"})
    assert a == b and list(a["artifacts"]) == ["a.edges"]
    assert (tmp_path / "m1.json").read_bytes() == (tmp_path / "m2.json").read_bytes()


@given(st.dictionaries(st.sampled_from("abcdef"), st.integers(0, 100), max_size=4),
       st.integers(0, 3))
def test_input_digest_changes_iff_inputs_change(inputs, seed):
    base = io.input_digest(inputs, seed)
    assert io.input_digest(dict(reversed(list(inputs.items()))), seed) == base
    assert io.input_digest(inputs, seed + 1) != base
    assert io.input_digest({**inputs, "g": 0}, seed) != base


def test_write_json_hash(tmp_path):
    h = io.write_json(tmp_path / "x.json", {"b": 1, "a": np.int64(2)})
    data = (tmp_path / "x.json").read_bytes()
    assert h == hashlib.sha256(data).hexdigest()
    assert data.startswith(b'{\n  "a": 2')
