"""Schur-triple predicates, link sets, safe elements, and link graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Set, Tuple

from .groups import GroupSpec, element_add, element_neg, element_sub
from .subsets import Subset

Pair = Tuple[int, int]


def is_sum_free(B: Subset) -> bool:
    """True iff no x, y, z in B satisfy x + y = z (x = y and x = z allowed)."""
    G = B.group
    elems = B.elements()
    bits = B.bits
    for a in elems:
        for b in elems:
            if bits >> element_add(G, a, b) & 1:
                return False
    return True


def count_schur_pairs(B: Subset) -> int:
    """Ordered pairs (x, y) in B x B with x + y in B."""
    G = B.group
    elems = B.elements()
    bits = B.bits
    count = 0
    for a in elems:
        for b in elems:
            if bits >> element_add(G, a, b) & 1:
                count += 1
    return count


def count_schur_triples_unordered(B: Subset) -> int:
    """Unordered variant: pairs {x, y} (x = y allowed once) with x + y in B."""
    G = B.group
    elems = B.elements()
    bits = B.bits
    count = 0
    for i, a in enumerate(elems):
        for b in elems[i:]:
            if bits >> element_add(G, a, b) & 1:
                count += 1
    return count


@dataclass(frozen=True)
class LinkSets:
    """The sets witnessing x = y+y, x = y+z, x = y-z inside a reference set A."""

    x: int
    c1: Subset
    c2: FrozenSet[Pair]
    c3: FrozenSet[Pair]

    def all_blockers(self) -> List[Tuple[int, ...]]:
        """Every member of C(x) as a tuple of elements of A."""
        out: List[Tuple[int, ...]] = [(y,) for y in self.c1]
        out.extend(self.c2)
        out.extend(self.c3)
        return out


def link_sets(x: int, A: Subset) -> LinkSets:
    G = A.group
    G._check(x)
    elems = A.elements()
    bits = A.bits
    c1_bits = 0
    c2: Set[Pair] = set()
    c3: Set[Pair] = set()
    for y in elems:
        if element_add(G, y, y) == x:
            c1_bits |= 1 << y
        # z with y + z = x
        z = element_sub(G, x, y)
        if z != y and z > y and bits >> z & 1:
            c2.add((y, z))
        # z with y - z = x or z - y = x
        for z in (element_sub(G, y, x), element_add(G, y, x)):
            if z != y and bits >> z & 1:
                c3.add((min(y, z), max(y, z)))
    return LinkSets(x=x, c1=Subset(G, c1_bits), c2=frozenset(c2), c3=frozenset(c3))


def is_safe(x: int, W: Subset, A: Subset) -> bool:
    """True iff no member of C(x) (built against A) lies fully inside W."""
    if not W.issubset(A):
        raise ValueError("W must be a subset of the reference set A")
    ls = link_sets(x, A)
    wbits = W.bits
    if ls.c1.bits & wbits:
        return False
    for y, z in ls.c2:
        if wbits >> y & 1 and wbits >> z & 1:
            return False
    for y, z in ls.c3:
        if wbits >> y & 1 and wbits >> z & 1:
            return False
    return True


@dataclass
class LinkGraph:
    """Graph on an ambient vertex set whose edges close into a source set S."""

    vertices: Subset
    adjacency: Dict[int, Set[int]]
    provenance: Dict[Pair, Set[int]] = field(default_factory=dict)

    def edges(self) -> List[Pair]:
        return sorted(self.provenance)

    def edge_count(self) -> int:
        return len(self.provenance)

    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.adjacency.values()), default=0)

    def degree(self, v: int) -> int:
        return len(self.adjacency.get(v, ()))

    def _add_edge(self, a: int, b: int, x: int) -> None:
        if a == b:
            return
        key = (min(a, b), max(a, b))
        self.adjacency.setdefault(a, set()).add(b)
        self.adjacency.setdefault(b, set()).add(a)
        self.provenance.setdefault(key, set()).add(x)


def build_link_graph_z2n(S: Subset) -> LinkGraph:
    """Graph on the odd residues of Z_2n with edges {a,b}: a+b or a-b in S."""
    G = S.group
    if len(G.orders) != 1 or G.n % 2:
        raise ValueError("ambient group must be a cyclic group of even order")
    two_n = G.n
    for x in S:
        if x % 2:
            raise ValueError("S must consist of even residues")
    odds = Subset.from_elements(G, range(1, two_n, 2))
    graph = LinkGraph(vertices=odds, adjacency={v: set() for v in odds})
    odd_list = odds.elements()
    for x in S:
        for a in odd_list:
            for b in ((x - a) % two_n, (a - x) % two_n, (a + x) % two_n):
                if b % 2 and b != a and b > a:
                    graph._add_edge(a, b, x)
                elif b % 2 and b != a:
                    graph._add_edge(b, a, x)
    return graph


def build_link_graph_general(S: Subset, A: Subset) -> LinkGraph:
    """Graph on A with edge set the union of the C2(x) matchings for x in S."""
    if not S.isdisjoint(A):
        raise ValueError("S and A must be disjoint")
    graph = LinkGraph(vertices=A, adjacency={v: set() for v in A})
    for x in S:
        for y, z in link_sets(x, A).c2:
            graph._add_edge(y, z, x)
    return graph


def restrict_graph(Gr: LinkGraph, removed: Subset) -> LinkGraph:
    """Induced subgraph on vertices minus the removed set."""
    if not removed.issubset(Gr.vertices):
        raise ValueError("removed set must lie inside the vertex set")
    keep = Gr.vertices - removed
    adjacency = {
        v: {u for u in Gr.adjacency.get(v, ()) if u in keep} for v in keep
    }
    provenance = {
        (a, b): set(xs)
        for (a, b), xs in Gr.provenance.items()
        if a in keep and b in keep
    }
    return LinkGraph(vertices=keep, adjacency=adjacency, provenance=provenance)


def count_negation_pairs(S: Subset) -> int:
    """Unordered pairs {x, -x} inside S with x != -x."""
    G = S.group
    count = 0
    for x in S:
        nx = element_neg(G, x)
        if nx != x and nx in S and x < nx:
            count += 1
    return count


def find_witness_U(Gr: LinkGraph, T: Subset, sample: Subset) -> Subset:
    """A small U in sample\\T with T inside N(U), via a maximal matching from T.

    Requires T to be a minimal vertex cover of Gr restricted to sample:
    sample\\T independent and every t in T with a private edge into sample\\T.
    """
    if not T.issubset(sample):
        raise ValueError("T must be a subset of the sample")
    if not sample.issubset(Gr.vertices):
        raise ValueError("sample must lie inside the vertex set")
    rest = sample - T
    rest_bits = rest.bits
    for v in rest:
        for u in Gr.adjacency.get(v, ()):
            if u != v and rest_bits >> u & 1:
                raise ValueError("sample minus T is not independent in the graph")
    outside: Dict[int, List[int]] = {}
    for t in T:
        nbrs = sorted(u for u in Gr.adjacency.get(t, ()) if rest_bits >> u & 1)
        if not nbrs:
            raise ValueError("T is not minimal: a member covers no private edge")
        outside[t] = nbrs
    matched_u: Set[int] = set()
    for t in sorted(outside):
        for u in outside[t]:
            if u not in matched_u:
                matched_u.add(u)
                break
    U = Subset.from_elements(sample.group, matched_u)
    # Maximality of the matching guarantees unmatched t still see a matched u.
    for t, nbrs in outside.items():
        if not any(u in matched_u for u in nbrs):
            raise AssertionError("maximal matching failed to dominate T")
    return U
