"""Schur predicates, link sets, safe elements, link graphs."""

import random

from hypothesis import given, settings, strategies as st

from sumfree import (
    GroupSpec,
    Subset,
    build_link_graph_general,
    build_link_graph_z2n,
    count_schur_pairs,
    find_witness_U,
    is_safe,
    is_sum_free,
    link_sets,
    restrict_graph,
)
from sumfree.gadgets import count_negation_pairs, count_schur_triples_unordered
from sumfree.groups import element_add


def brute_is_sum_free(G, elems):
    s = set(elems)
    return not any(element_add(G, a, b) in s for a in s for b in s)


@given(st.lists(st.integers(2, 5), min_size=1, max_size=2).map(GroupSpec), st.data())
def test_is_sum_free_matches_bruteforce(G, data):
    bits = data.draw(st.integers(0, (1 << G.n) - 1))
    A = Subset(G, bits)
    assert is_sum_free(A) == brute_is_sum_free(G, A.elements())


@given(st.lists(st.integers(2, 5), min_size=1, max_size=2).map(GroupSpec), st.data())
def test_sum_free_iff_no_schur_pairs(G, data):
    A = Subset(G, data.draw(st.integers(0, (1 << G.n) - 1)))
    assert is_sum_free(A) == (count_schur_pairs(A) == 0)
    assert is_sum_free(A) == (count_schur_triples_unordered(A) == 0)


def test_zero_never_sum_free_with_company():
    G = GroupSpec((10,))
    assert not is_sum_free(Subset.from_elements(G, [0, 3]))
    assert not is_sum_free(Subset.from_elements(G, [0]))  # 0 + 0 = 0


def test_odd_part_always_sum_free():
    for two_n in (4, 10, 16, 30):
        G = GroupSpec((two_n,))
        odds = Subset.from_elements(G, range(1, two_n, 2))
        assert is_sum_free(odds)


def test_safe_matches_direct_check():
    rng = random.Random(5)
    G = GroupSpec((26,))
    odds = Subset.from_elements(G, range(1, 26, 2))
    for _ in range(120):
        W = Subset.from_elements(G, [a for a in odds if rng.random() < 0.4])
        for x in range(2, 26, 2):
            expected = is_sum_free(W.add(x))
            assert is_safe(x, W, odds) == expected, (W.elements(), x)


def test_link_sets_partition():
    G = GroupSpec((20,))
    odds = Subset.from_elements(G, range(1, 20, 2))
    ls = link_sets(6, odds)
    # y + y = 6 -> y = 3 or y = 13.
    assert set(ls.c1) == {3, 13}
    for y, z in ls.c2:
        assert (y + z) % 20 == 6
    for y, z in ls.c3:
        assert (y - z) % 20 == 6 or (z - y) % 20 == 6
    for blocker in ls.all_blockers():
        assert all(b in odds for b in blocker)


def test_link_graph_z2n_degree_bound():
    # Each x in S contributes at most 3 partners per vertex.
    G = GroupSpec((40,))
    S = Subset.from_elements(G, [2, 8, 14])
    graph = build_link_graph_z2n(S)
    assert graph.max_degree() <= 3 * len(S)
    for (a, b), sources in graph.provenance.items():
        for x in sources:
            assert (a + b) % 40 == x or (a - b) % 40 == x or (b - a) % 40 == x


def test_restrict_graph_removes_vertices():
    G = GroupSpec((40,))
    S = Subset.from_elements(G, [2, 8])
    graph = build_link_graph_z2n(S)
    removed = Subset.from_elements(G, [1, 3, 5])
    sub = restrict_graph(graph, removed)
    assert removed.isdisjoint(sub.vertices)
    for v, nbrs in sub.adjacency.items():
        assert v in sub.vertices
        assert not (set(nbrs) & set(removed))


def test_build_link_graph_general_matches_c2():
    G = GroupSpec((21,))
    A = Subset.from_elements(G, range(8, 15))
    S = Subset.from_elements(G, [1, 2])
    graph = build_link_graph_general(S, A)
    for (y, z), sources in graph.provenance.items():
        for x in sources:
            assert element_add(G, y, z) == x


def test_find_witness_U_small():
    G = GroupSpec((20,))
    S = Subset.from_elements(G, [4])
    graph = build_link_graph_z2n(S)
    sample = graph.vertices
    # Build a minimal vertex cover T of the graph restricted to the sample.
    cover = set()
    for a, b in graph.edges():
        if a not in cover and b not in cover:
            cover.add(a)
    # Make T minimal: drop members without a private edge.
    changed = True
    while changed:
        changed = False
        for t in sorted(cover):
            smaller = cover - {t}
            if all(a in smaller or b in smaller for a, b in graph.edges()):
                cover = smaller
                changed = True
    T = Subset.from_elements(G, cover)
    U = find_witness_U(graph, T, sample)
    assert U.isdisjoint(T)
    # Every t in T has a neighbor in U (U dominates T).
    for t in T:
        assert any(u in graph.adjacency.get(t, ()) for u in U)


def test_count_negation_pairs():
    G = GroupSpec((12,))
    A = Subset.from_elements(G, [1, 11, 3, 6])
    assert count_negation_pairs(A) == 1  # {1, 11}; 6 = -6 does not count
