"""Exact deciders for index-2 structure: odd-part uniqueness and q=2 goodness.

Both questions reduce to the same search.  Split the sample along an index-2
subgroup H (reference extremal set A = G \\ H).  Any sum-free M decomposes as
S = M ∩ H and I = M ∩ A, where S must be sum-free and I must avoid every
pair of A-elements whose sum or difference lands in S.  M reaches the
reference size |sample ∩ A| exactly when the blockers of S can be covered by
at most |S| removals, so the search looks for a "deficient" S: a nonempty
sum-free S ⊆ H ∩ sample whose blocker graph on W = sample ∩ A has a vertex
cover of size ≤ |S| (loop vertices are forced into the cover).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .groups import GroupSpec, element_add, element_sub
from .subsets import Subset
from .solver import BudgetExceeded, max_sum_free


@dataclass
class _Blockers:
    loops: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...]


def _build_blockers(G: GroupSpec, x: int, w_list: Sequence[int], w_set: Set[int]) -> _Blockers:
    loops: List[int] = []
    edges: Set[Tuple[int, int]] = set()
    for a in w_list:
        if element_add(G, a, a) == x:
            loops.append(a)
        b = element_sub(G, x, a)
        if b != a and b in w_set and a < b:
            edges.add((a, b))
        for b in (element_sub(G, a, x), element_add(G, a, x)):
            if b != a and b in w_set:
                edges.add((min(a, b), max(a, b)))
    return _Blockers(loops=tuple(loops), edges=tuple(sorted(edges)))


class _Budget:
    __slots__ = ("left", "cleared_s")

    def __init__(self, cap: int):
        self.left = cap
        # Largest candidate-set size fully refuted before exhaustion; a
        # caller that falls back to another engine may use it as a valid
        # lower bound on the H-side size of any remaining counterexample.
        self.cleared_s = 0

    def spend(self, amount: int = 1) -> None:
        self.left -= amount
        if self.left < 0:
            raise BudgetExceeded("parity decision search exceeded its node cap")


def _greedy_matching_lb(edges: Sequence[Tuple[int, int]], forced: Set[int]) -> int:
    """Forced loop vertices plus a greedy matching on the remaining edges."""
    matched: Set[int] = set()
    m = 0
    for a, b in edges:
        if a in forced or b in forced or a in matched or b in matched:
            continue
        matched.add(a)
        matched.add(b)
        m += 1
    return len(forced) + m


def _matching_lb(edges: Sequence[Tuple[int, int]], forced: Set[int]) -> int:
    """Forced loop vertices plus an augmenting-path matching on the rest.

    Alternating-path augmentation without blossom contraction: the result is
    a valid matching (hence a valid vertex-cover lower bound), usually equal
    to the maximum matching on these sparse blocker graphs.
    """
    adj: Dict[int, List[int]] = {}
    for a, b in edges:
        if a in forced or b in forced:
            continue
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    mate: Dict[int, int] = {}
    for a, b in edges:
        if a in forced or b in forced or a in mate or b in mate:
            continue
        mate[a] = b
        mate[b] = a

    def try_augment(v: int, visited: Set[int]) -> bool:
        for w in adj[v]:
            if w in visited:
                continue
            visited.add(w)
            m = mate.get(w)
            if m is None or (m != v and try_augment(m, visited)):
                mate[w] = v
                mate[v] = w
                return True
        return False

    for v in list(adj):
        if v not in mate:
            try_augment(v, {v})
    return len(forced) + len(mate) // 2


def _vc_exact(
    edges: Sequence[Tuple[int, int]],
    forced: Set[int],
    budget: _Budget,
    excluded: Set[int] | None = None,
) -> Optional[Tuple[int, Set[int]]]:
    """Minimum vertex cover containing all forced vertices, or None when a
    vertex in ``excluded`` is forced to be covered (infeasible)."""
    excluded = excluded or set()
    if forced & excluded:
        return None
    adj: Dict[int, Set[int]] = {}
    for a, b in edges:
        if a in forced or b in forced:
            continue
        if a in excluded and b in excluded:
            return None
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    # Excluded endpoints force their neighbors into the cover.
    pre: Set[int] = set()
    work = True
    while work:
        work = False
        for v in list(adj):
            if v in excluded:
                for u in adj.pop(v):
                    adj[u].discard(v)
                    if u not in pre:
                        pre.add(u)
                work = True
        for v in pre:
            if v in adj:
                for u in adj.pop(v):
                    adj[u].discard(v)
                work = True
        for v in [v for v, nb in adj.items() if not nb]:
            del adj[v]

    best: List[Optional[Set[int]]] = [None]
    best_size = [len({v for e in edges for v in e}) + 1]

    def rec(adj: Dict[int, Set[int]], acc: Set[int]) -> None:
        budget.spend()
        live = {v: nb for v, nb in adj.items() if nb}
        if not live:
            if len(acc) < best_size[0]:
                best_size[0] = len(acc)
                best[0] = set(acc)
            return
        lb = 0
        matched: Set[int] = set()
        for v, nb in live.items():
            if v in matched:
                continue
            for u in nb:
                if u not in matched:
                    matched.add(v)
                    matched.add(u)
                    lb += 1
                    break
        if len(acc) + lb >= best_size[0]:
            return
        v = max(live, key=lambda u: (len(live[u]), -u))
        nbrs = live[v]
        # Branch 1: v in the cover (unless excluded).
        if v not in excluded:
            sub = {
                u: {w for w in nb if w != v}
                for u, nb in live.items()
                if u != v
            }
            rec(sub, acc | {v})
        # Branch 2: v not in the cover, all neighbors are.
        if not nbrs & excluded:
            gone = nbrs | {v}
            sub = {
                u: {w for w in nb if w not in gone}
                for u, nb in live.items()
                if u not in gone
            }
            rec(sub, acc | nbrs)

    rec(adj, set(pre))
    if best[0] is None:
        return None
    return len(forced) + len(best[0]), forced | best[0]


def _sumfree_addable(G: GroupSpec, chosen: Sequence[int], chosen_set: Set[int], u: int) -> bool:
    uu = element_add(G, u, u)
    if uu == u or uu in chosen_set:
        return False
    for c in chosen:
        s = element_add(G, u, c)
        if s == u or s == c or s in chosen_set:
            return False
        if element_sub(G, u, c) in chosen_set:
            return False
        if element_add(G, c, c) == u:
            return False
    return True


@dataclass
class _Instance:
    G: GroupSpec
    sample: Subset
    ref_bits: int
    others: Tuple[int, ...]
    w_list: List[int]
    cands: List[int]
    blockers: Dict[int, _Blockers]
    cost1: Dict[int, int]


def _leaf_witness(
    inst: _Instance,
    S: List[int],
    forced: Set[int],
    edges: List[Tuple[int, int]],
    budget: _Budget,
) -> Optional[Subset]:
    """Resolve a candidate deficient S: does it yield a maximum sum-free set
    at least as large as the reference intersection and contained in no
    catalog member?  Returns the witness set or None."""
    s = len(S)
    res = _vc_exact(edges, forced, budget)
    assert res is not None
    cost, cover = res
    if cost > s:
        return None
    G = inst.G
    w_set = set(inst.w_list)
    kept = sorted(w_set - cover)
    m_elems = sorted(S) + kept
    m_bits = 0
    for e in m_elems:
        m_bits |= 1 << e
    size = len(m_elems)
    if size < len(inst.w_list):
        return None
    # Containment in another catalog member only matters for exact ties.
    bad_js = [
        j for j, a in enumerate(inst.others) if m_bits & ~a == 0
    ]
    if size == len(inst.w_list) and bad_js:
        # Try to pick a cover avoiding at least one kept element in each
        # containing member's complement, so the witness escapes it.
        full = (1 << G.n) - 1
        avoid_pools = [
            [w for w in inst.w_list if (1 << w) & (full & ~inst.others[j])]
            for j in bad_js
        ]
        found = None
        if len(bad_js) == 1:
            for w in avoid_pools[0]:
                r = _vc_exact(edges, forced, budget, excluded={w})
                if r is not None and r[0] <= s:
                    found = r[1]
                    break
        else:
            for w1 in avoid_pools[0]:
                for w2 in avoid_pools[1]:
                    r = _vc_exact(edges, forced, budget, excluded={w1, w2})
                    if r is not None and r[0] <= s:
                        found = r[1]
                        break
                if found:
                    break
        if found is None:
            return None
        cover = found
        kept = sorted(w_set - cover)
        m_elems = sorted(S) + kept
        m_bits = 0
        for e in m_elems:
            m_bits |= 1 << e
        if len(m_elems) < len(inst.w_list):
            return None
        if any(m_bits & ~a == 0 for a in inst.others):
            return None
    witness = Subset(G, m_bits)
    from .gadgets import is_sum_free

    assert is_sum_free(witness), "internal error: constructed witness not sum-free"
    return witness


def _pair_key(a: int, b: int) -> Tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _find_deficient(inst: _Instance, budget: _Budget) -> Optional[Subset]:
    G = inst.G
    w_size = len(inst.w_list)
    cands = inst.cands
    if not cands:
        return None

    # A sum-free subset of the H side larger than the reference intersection
    # violates uniqueness outright; it also caps the useful search depth.
    h_part = Subset.from_elements(G, cands)
    solve = max_sum_free(h_part, cap=max(budget.left // 4, 10_000))
    if solve.max_size > w_size:
        return solve.witness
    if solve.enumeration_complete:
        s_cap = min(solve.max_size, w_size)
    else:
        s_cap = min(len(cands), w_size)

    e_count = {x: len(inst.blockers[x].edges) for x in cands}
    pool = [x for x in cands if inst.cost1[x] <= s_cap]

    # Pairwise admissibility: a deficient S of size s contains, for every
    # pair {x, y} ⊆ S, a sum-free-compatible pair whose joint blocker graph
    # has a cover of size ≤ s.  A matching lower bound on that cover cost is
    # cheap and lets an iterated-core filter kill most sizes outright.
    pair_lb: Dict[Tuple[int, int], int] = {}
    for i, xa in enumerate(pool):
        bl_a = inst.blockers[xa]
        for xb in pool[i + 1 :]:
            if not (
                _sumfree_addable(G, (xa,), {xa}, xb)
                and _sumfree_addable(G, (xb,), {xb}, xa)
            ):
                continue
            budget.spend()
            bl_b = inst.blockers[xb]
            lb = _matching_lb(
                tuple(set(bl_a.edges) | set(bl_b.edges)),
                set(bl_a.loops) | set(bl_b.loops),
            )
            pair_lb[(xa, xb)] = lb

    for s in range(1, s_cap + 1):
        X = [x for x in pool if inst.cost1[x] <= s]
        if len(X) < s:
            budget.cleared_s = s
            continue
        if s >= 2:
            # Iterated (s-1)-core of the compatibility graph.
            adj: Dict[int, Set[int]] = {x: set() for x in X}
            x_set = set(X)
            for (xa, xb), lb in pair_lb.items():
                if lb <= s and xa in x_set and xb in x_set:
                    adj[xa].add(xb)
                    adj[xb].add(xa)
            changed = True
            while changed:
                changed = False
                for v in list(adj):
                    if v in adj and len(adj[v]) < s - 1:
                        for u in adj.pop(v):
                            adj[u].discard(v)
                        changed = True
            if len(adj) < s:
                budget.cleared_s = s
                continue
            X = [x for x in X if x in adj]
            compat = adj
        else:
            compat = {x: set() for x in X}
        X.sort(key=lambda x: (-e_count[x], x))
        n_x = len(X)

        S: List[int] = []
        S_set: Set[int] = set()
        forced: Set[int] = set()
        edges: List[Tuple[int, int]] = []

        def dfs(idx: int, allowed: Set[int]) -> Optional[Subset]:
            budget.spend()
            if len(S) == s:
                return _leaf_witness(inst, S, forced, edges, budget)
            for i in range(idx, n_x):
                x = X[i]
                if len(S) + (n_x - i) < s:
                    return None
                if S and (x not in allowed):
                    continue
                if not _sumfree_addable(G, S, S_set, x):
                    continue
                bl = inst.blockers[x]
                S.append(x)
                S_set.add(x)
                new_forced = [y for y in bl.loops if y not in forced]
                forced.update(new_forced)
                n_edges = len(edges)
                edges.extend(bl.edges)
                if _matching_lb(edges, forced) <= s:
                    sub_allowed = allowed & compat[x] if s >= 2 else allowed
                    if len(S) + len(sub_allowed) >= s or len(S) == s:
                        found = dfs(i + 1, sub_allowed)
                        if found is not None:
                            return found
                S.pop()
                S_set.remove(x)
                forced.difference_update(new_forced)
                del edges[n_edges:]
            return None

        found = dfs(0, set(X))
        if found is not None:
            return found
        budget.cleared_s = s
    return None


def _make_instance(sample: Subset, ref: Subset, others: Sequence[Subset]) -> _Instance:
    G = sample.group
    ref_bits = ref.bits
    w_list = [e for e in sample if ref_bits >> e & 1]
    w_set = set(w_list)
    cands = [e for e in sample if not ref_bits >> e & 1 and e != 0]
    blockers = {x: _build_blockers(G, x, w_list, w_set) for x in cands}
    cost1: Dict[int, int] = {}
    budget = _Budget(10**6)
    for x in cands:
        bl = blockers[x]
        res = _vc_exact(bl.edges, set(bl.loops), budget)
        assert res is not None
        cost1[x] = res[0]
    return _Instance(
        G=G,
        sample=sample,
        ref_bits=ref_bits,
        others=tuple(o.bits for o in others),
        w_list=w_list,
        cands=cands,
        blockers=blockers,
        cost1=cost1,
    )


def decide_odd_uniqueness(sample: Subset, cap: int = 10**6) -> bool:
    """True iff the odd part of the sample is its unique maximum sum-free set."""
    G = sample.group
    odds = Subset.from_elements(G, range(1, G.n, 2))
    inst = _make_instance(sample, odds, others=())
    budget = _Budget(cap)
    return _find_deficient(inst, budget) is None


def decide_q2_goodness(sample: Subset, catalog, cap: int = 10**6) -> Tuple[bool, Optional[Subset]]:
    """Exact goodness decision for a type I(2) group via its extremal catalog.

    Returns (good, counterexample).  Catalog members must be the complements
    of the index-2 subgroups (which they are for q = 2).
    """
    G = sample.group
    sets = list(catalog.sets)
    if not sets:
        raise ValueError("empty catalog")
    scores = [len(sample & a) for a in sets]
    ref_idx = max(range(len(sets)), key=lambda i: (scores[i], -i))
    ref = sets[ref_idx]
    others = [a for i, a in enumerate(sets) if i != ref_idx]
    inst = _make_instance(sample, ref, others)
    budget = _Budget(cap)
    witness = _find_deficient(inst, budget)
    return witness is None, witness
