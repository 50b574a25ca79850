"""Group arithmetic, classification, and homomorphism enumeration."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sumfree import (
    GroupSpec,
    classify,
    element_add,
    element_neg,
    element_sub,
    enumerate_abelian_groups,
    enumerate_homs_to_Zq,
    kernel_subgroup,
    mu,
    parse_group_literal,
)
from sumfree.groups import hom_values, primary_decomposition

small_groups = st.lists(st.integers(2, 6), min_size=1, max_size=3).map(GroupSpec)


@given(small_groups, st.data())
def test_encode_decode_roundtrip(G, data):
    e = data.draw(st.integers(0, G.n - 1))
    assert G.encode(G.decode(e)) == e


@given(small_groups, st.data())
def test_group_axioms(G, data):
    a = data.draw(st.integers(0, G.n - 1))
    b = data.draw(st.integers(0, G.n - 1))
    c = data.draw(st.integers(0, G.n - 1))
    assert element_add(G, a, b) == element_add(G, b, a)
    assert element_add(G, element_add(G, a, b), c) == element_add(
        G, a, element_add(G, b, c)
    )
    assert element_add(G, a, 0) == a
    assert element_add(G, a, element_neg(G, a)) == 0
    assert element_sub(G, a, b) == element_add(G, a, element_neg(G, b))


def test_cyclic_addition_matches_modular():
    G = GroupSpec((12,))
    for a in range(12):
        for b in range(12):
            assert element_add(G, a, b) == (a + b) % 12


def test_literal_roundtrip():
    for text in ("Z10", "Z2xZ500", "Z2^5", "Z4xZ3"):
        G = parse_group_literal(text)
        assert parse_group_literal(G.literal()).orders == G.orders
    with pytest.raises(ValueError):
        parse_group_literal("Zfoo")
    with pytest.raises(ValueError):
        parse_group_literal("Z1")


def test_classification_examples():
    assert str(classify(GroupSpec((10,)))) == "I(2)"
    assert str(classify(GroupSpec((9,)))) == "II"
    assert str(classify(GroupSpec((6, 5)))) == "I(2)"
    assert classify(GroupSpec((7,))).tag == "III"
    assert classify(GroupSpec((21,))).tag == "II"
    assert classify(GroupSpec((5,))).q == 5


def test_mu_values():
    assert mu(GroupSpec((10,))) == Fraction(1, 2)
    assert mu(GroupSpec((9,))) == Fraction(1, 3)
    assert mu(GroupSpec((7,))) == Fraction(2, 7)
    assert mu(GroupSpec((5,))) == Fraction(2, 5)


@given(st.integers(2, 40))
def test_mu_times_n_integral(order):
    for G in enumerate_abelian_groups(order):
        assert (mu(G) * G.n).denominator == 1


@given(st.integers(2, 40))
def test_classify_isomorphism_invariant(order):
    kinds = {str(classify(G)) for G in enumerate_abelian_groups(order)}
    assert len(kinds) == 1  # classification depends only on the order


def test_abelian_group_counts():
    # Number of isomorphism classes = product of partition counts.
    assert len(enumerate_abelian_groups(8)) == 3
    assert len(enumerate_abelian_groups(12)) == 2
    assert len(enumerate_abelian_groups(16)) == 5
    assert len(enumerate_abelian_groups(30)) == 1


def test_hom_count_and_kernel():
    G = GroupSpec((2, 4, 3))
    homs = enumerate_homs_to_Zq(G, 2)
    assert len(homs) == 4  # two generators have even order
    nonzero = [phi for phi in homs if not phi.is_zero()]
    assert len(nonzero) == 3
    for phi in nonzero:
        H = kernel_subgroup(G, phi)
        assert len(H) == G.n // 2
        vals = hom_values(G, phi)
        for a in range(G.n):
            for b in range(a, G.n):
                assert (vals[a] + vals[b]) % 2 == vals[element_add(G, a, b)]


def test_primary_decomposition_is_isomorphic():
    G = GroupSpec((6, 5))
    P = primary_decomposition(G)
    assert P.n == 30
    assert sorted(P.orders) == [2, 3, 5]
