"""FKG / Janson / Chernoff bound evaluators against the exact oracle."""

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from sumfree import (
    SetFamily,
    chernoff_bounds,
    exact_avoidance_probability,
    fkg_lower,
    janson_stats,
)


def random_family(rng, max_universe=12):
    u = rng.randint(4, max_universe)
    members = []
    for _ in range(rng.randint(1, 5)):
        size = rng.randint(1, min(4, u))
        members.append(rng.sample(range(u), size))
    return SetFamily.from_lists(u, members)


def test_sandwich_random_families():
    rng = random.Random(17)
    for _ in range(150):
        F = random_family(rng)
        p = rng.choice((0.05, 0.2, 0.4, 0.6, 0.8))
        exact = exact_avoidance_probability(F, p)
        lo = fkg_lower(F, p)
        js = janson_stats(F, p)
        assert lo <= exact * (1 + 1e-12) + 1e-15
        assert exact <= js.bound_main * (1 + 1e-12) + 1e-15
        if js.bound_ratio is not None:
            assert exact <= js.bound_ratio * (1 + 1e-12) + 1e-15


def test_disjoint_family_is_exact_product():
    F = SetFamily.from_lists(9, [[0, 1], [3, 4, 5], [7]])
    p = 0.3
    expected = (1 - p**2) * (1 - p**3) * (1 - p)
    assert math.isclose(fkg_lower(F, p), expected, rel_tol=1e-12)
    assert math.isclose(exact_avoidance_probability(F, p), expected, rel_tol=1e-12)
    js = janson_stats(F, p)
    assert js.delta == 0.0
    assert math.isclose(js.M, expected, rel_tol=1e-12)


def test_janson_delta_counts_ordered_pairs():
    F = SetFamily.from_lists(4, [[0, 1], [1, 2]])
    js = janson_stats(F, 0.5)
    # One unordered intersecting pair, counted twice, union size 3.
    assert math.isclose(js.delta, 2 * 0.5**3, rel_tol=1e-12)


def test_extreme_p():
    F = SetFamily.from_lists(5, [[0, 1]])
    assert exact_avoidance_probability(F, 0.0) == 1.0
    assert exact_avoidance_probability(F, 1.0) == 0.0
    assert fkg_lower(F, 1.0) == 0.0


def test_universe_cap():
    F = SetFamily.from_lists(25, [[0]])
    with pytest.raises(ValueError):
        exact_avoidance_probability(F, 0.5)


def test_member_validation():
    with pytest.raises(ValueError):
        SetFamily.from_lists(4, [[]])
    with pytest.raises(ValueError):
        SetFamily.from_lists(4, [[5]])


@given(st.integers(10, 10**4), st.floats(0.01, 0.5), st.floats(0.5, 20.0))
@settings(max_examples=80, deadline=None)
def test_chernoff_bounds_ordered(n, p, a):
    upper, lower = chernoff_bounds(n, p, a)
    assert 0.0 < lower
    assert lower <= upper


def test_chernoff_rejects_bad_args():
    with pytest.raises(ValueError):
        chernoff_bounds(10, 0.5, 0.0)
    with pytest.raises(ValueError):
        chernoff_bounds(10, 0.0, 1.0)
