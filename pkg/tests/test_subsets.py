"""Bitmask subset container."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sumfree import GroupSpec, Subset

G = GroupSpec((24,))
subsets = st.integers(0, (1 << 24) - 1).map(lambda b: Subset(G, b))


@given(subsets)
def test_mask_roundtrip(A):
    assert Subset.from_mask(G, A.to_mask()).bits == A.bits
    assert Subset.from_elements(G, A.elements()).bits == A.bits
    assert len(A) == len(A.elements())


@given(subsets, subsets)
def test_set_algebra_matches_python_sets(A, B):
    sa, sb = set(A), set(B)
    assert set(A | B) == sa | sb
    assert set(A & B) == sa & sb
    assert set(A - B) == sa - sb
    assert A.issubset(B) == sa.issubset(sb)
    assert A.isdisjoint(B) == sa.isdisjoint(sb)
    assert set(A.complement()) == set(range(24)) - sa


@given(subsets, st.integers(0, 23))
def test_add_remove(A, e):
    assert e in A.add(e)
    assert e not in A.remove(e)
    assert A.add(e).remove(e).bits == A.remove(e).bits


def test_bounds_checks():
    with pytest.raises(ValueError):
        Subset(G, 1 << 24)
    with pytest.raises(IndexError):
        Subset.from_elements(G, [24])
    with pytest.raises(ValueError):
        A = Subset.empty(G)
        B = Subset.empty(GroupSpec((5,)))
        A.union(B)


def test_to_array_sorted():
    A = Subset.from_elements(G, [5, 1, 17])
    assert A.to_array().tolist() == [1, 5, 17]
    assert str(A) == "{1,5,17}"


def test_empty_and_full():
    assert len(Subset.empty(G)) == 0
    assert len(Subset.full(G)) == 24
    assert np.all(Subset.full(G).to_mask())
