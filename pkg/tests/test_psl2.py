import numpy as np
import pytest
from hypothesis import given, strategies as st

from expander_forge.lps import enumerate_A
from expander_forge.psl2 import (PSL2Element, PSL2Group, Quaternion, embed, group_order,
                                 sqrt_minus_one)


def canon(m, q):
    """Pick the sign of +-M whose first nonzero entry lies in [1, (q-1)/2]."""
    m = [x % q for x in m]
    first = next(x for x in m if x)
    if first > (q - 1) // 2:
        m = [(-x) % q for x in m]
    return tuple(m)


def matmul(x, y, q):
    a, b, c, d = x
    e, f, g, h = y
    return canon((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h), q)


def test_orders():
    assert group_order(29) == 12180
    assert group_order(13) == 1092
    assert len(PSL2Group(13)) == 1092


def test_bad_modulus():
    with pytest.raises(ValueError):
        PSL2Group(7)
    with pytest.raises(ValueError):
        sqrt_minus_one(31)


def test_sqrt_minus_one():
    for q in (5, 13, 17, 29, 37, 101):
        j = sqrt_minus_one(q)
        assert j * j % q == q - 1


idx = st.integers(min_value=0, max_value=12179)


@given(idx, idx)
def test_mul_matches_matrix_product(G29, x, y):
    q = 29
    got = G29.element(int(G29.mul(x, y))).entries
    want = matmul(G29.element(x).entries, G29.element(y).entries, q)
    assert got == want


@given(idx, idx, idx)
def test_associative(G29, x, y, z):
    assert G29.mul(G29.mul(x, y), z) == G29.mul(x, G29.mul(y, z))


@given(idx)
def test_inverse(G29, x):
    e = G29.identity
    assert G29.mul(x, G29.inv(x)) == e and G29.mul(G29.inv(x), x) == e
    assert G29.element(x).inverse() == G29.element(int(G29.inv(x)))


def test_identity_and_determinants(G29):
    assert G29.element(G29.identity).entries == (1, 0, 0, 1)
    m = G29.mats
    det = (m[:, 0] * m[:, 3] - m[:, 1] * m[:, 2]) % 29
    assert (det == 1).all()
    assert len(np.unique(G29.keys)) == G29.order


def test_quaternion_arithmetic():
    i, j, k = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)
    assert i * j == k and j * k == i and k * i == j
    assert i * i == Quaternion(-1, 0, 0, 0)
    a = Quaternion(1, 2, 0, 0)
    assert (a * a.conjugate()) == Quaternion(5, 0, 0, 0)


quat = st.tuples(*[st.integers(-6, 6)] * 4).map(lambda t: Quaternion(*t))


@given(quat, quat)
def test_norm_is_multiplicative(a, b):
    assert (a * b).norm == a.norm * b.norm


def test_embedding_is_multiplicative():
    q = 29
    A5, A13 = enumerate_A(5), enumerate_A(13)
    for a in A5:
        for b in A13:
            assert embed(a * b, q) == embed(a, q) * embed(b, q)


def test_embedding_rejects_nonresidue_norm():
    with pytest.raises(ValueError):
        embed(Quaternion(1, 4, 0, 0), 29)  # norm 17 is not a square mod 29


def test_element_roundtrip(G29):
    for i in (0, 1, 406, 12179):
        assert G29.index(G29.element(i)) == i
    g = PSL2Element.from_matrix(-1, 0, 0, -1, 29)
    assert G29.index(g) == G29.identity == 406
