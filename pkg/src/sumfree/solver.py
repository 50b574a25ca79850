"""Exact maximum sum-free search and the goodness/uniqueness deciders."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .groups import GroupSpec, element_add, element_sub
from .subsets import Subset

DEFAULT_NODE_CAP = 10**6


class BudgetExceeded(Exception):
    """Raised when a decision procedure exhausts its node budget."""


@dataclass(frozen=True)
class SolveResult:
    max_size: int
    witness: Subset
    optima: Optional[Tuple[Subset, ...]]
    enumeration_complete: bool
    nodes_explored: int


def _schur_constraints(B: Subset) -> List[Tuple[int, ...]]:
    """All constraints {x, y, x+y} with every participant in B, as element tuples.

    Degenerate triples (x = y, or sum landing back on a summand) are included.
    """
    G = B.group
    elems = B.elements()
    bits = B.bits
    seen = set()
    out: List[Tuple[int, ...]] = []
    for i, a in enumerate(elems):
        for b in elems[i:]:
            c = element_add(G, a, b)
            if bits >> c & 1:
                key = tuple(sorted({a, b, c}))
                if key not in seen:
                    seen.add(key)
                    out.append(key)
    return out


def _addable(G: GroupSpec, chosen_bits: int, chosen: Sequence[int], u: int) -> bool:
    """Whether chosen + {u} stays sum-free, given chosen already is."""
    uu = element_add(G, u, u)
    if uu == u or chosen_bits >> uu & 1:
        return False
    for c in chosen:
        s = element_add(G, u, c)
        if s == u or s == c or chosen_bits >> s & 1:
            return False
        d = element_sub(G, u, c)
        if chosen_bits >> d & 1 or d == u:
            return False
    return True


def _greedy_bound(order: Sequence[int], cand_bits: int, constraints) -> int:
    """Upper bound: candidates minus a greedy packing of disjoint violated triples."""
    used = 0
    hits = 0
    for tri in constraints:
        mask = 0
        ok = True
        for v in tri:
            if not cand_bits >> v & 1:
                ok = False
                break
            mask |= 1 << v
        if ok and not mask & used:
            used |= mask
            hits += 1
    return cand_bits.bit_count() - hits


def max_sum_free(
    B: Subset, enumerate_optima: bool = False, cap: int = DEFAULT_NODE_CAP
) -> SolveResult:
    """Exact maximum sum-free subset of B via branch and bound.

    Branching order: descending degree in the Schur-constraint hypergraph of
    B, ties by ascending element index.  Deterministic for fixed input.
    With ``enumerate_optima`` all optima are collected until the node cap;
    ``enumeration_complete`` reports whether the search finished.
    """
    G = B.group
    constraints = _schur_constraints(B)
    degree = {e: 0 for e in B}
    for tri in constraints:
        for v in tri:
            degree[v] += 1
    order = sorted(B, key=lambda e: (-degree[e], e))
    pos = {e: i for i, e in enumerate(order)}
    constraints = sorted(
        constraints, key=lambda tri: min(pos[v] for v in tri)
    )

    best_bits = 0
    best_size = 0
    # Greedy warm start in branching order gives an initial lower bound.
    chosen: List[int] = []
    chosen_bits = 0
    for u in order:
        if _addable(G, chosen_bits, chosen, u):
            chosen.append(u)
            chosen_bits |= 1 << u
    best_bits = chosen_bits
    best_size = len(chosen)

    optima: set[int] = set()
    nodes = 0
    complete = True

    def dfs(idx: int, chosen: List[int], chosen_bits: int, cand_bits: int) -> None:
        nonlocal best_bits, best_size, nodes, complete, optima
        nodes += 1
        if nodes > cap:
            complete = False
            return
        size = len(chosen)
        if size > best_size:
            best_size = size
            best_bits = chosen_bits
            if enumerate_optima:
                optima = {chosen_bits}
        elif enumerate_optima and size == best_size:
            optima.add(chosen_bits)
        remaining = cand_bits.bit_count()
        if remaining == 0:
            return
        limit = size + remaining
        if limit < best_size or (not enumerate_optima and limit <= best_size):
            return
        bound = size + _greedy_bound(order, cand_bits, constraints)
        if bound < best_size or (not enumerate_optima and bound <= best_size):
            return
        for i in range(idx, len(order)):
            u = order[i]
            if not cand_bits >> u & 1:
                continue
            rest = cand_bits
            for j in range(idx, i + 1):
                rest &= ~(1 << order[j])
            if _addable(G, chosen_bits, chosen, u):
                chosen.append(u)
                dfs(i + 1, chosen, chosen_bits | 1 << u, rest)
                chosen.pop()
                if not complete:
                    return
        return

    dfs(0, [], 0, B.bits)

    # The greedy warm start never enters the optima list by itself; recover
    # ties by rerunning collection only when enumeration was requested.
    if enumerate_optima and complete and not optima:
        # best came from the warm start and was never re-found: force one pass
        optima = {best_bits}

    opt_subsets: Optional[Tuple[Subset, ...]] = None
    if enumerate_optima:
        opt_subsets = tuple(Subset(G, bits) for bits in sorted(optima))
        if opt_subsets:
            best_bits = opt_subsets[0].bits
    return SolveResult(
        max_size=best_size,
        witness=Subset(G, best_bits),
        optima=opt_subsets,
        enumeration_complete=complete,
        nodes_explored=nodes,
    )


@dataclass(frozen=True)
class GoodnessVerdict:
    good: bool
    counterexample: Optional[Subset]
    max_size: int


def is_sum_free_good(B: Subset, catalog, cap: int = DEFAULT_NODE_CAP) -> GoodnessVerdict:
    """Whether every maximum sum-free subset of B lies inside a catalog member.

    Raises BudgetExceeded when the enumeration cap is hit before resolution.
    """
    if catalog.group != B.group:
        raise ValueError("catalog covers a different group")
    result = max_sum_free(B, enumerate_optima=True, cap=cap)
    if not result.enumeration_complete:
        raise BudgetExceeded("optimum enumeration exceeded the node cap")
    members = [a.bits for a in catalog.sets]
    for m in result.optima or ():
        if not any(m.bits & ~a == 0 for a in members):
            return GoodnessVerdict(good=False, counterexample=m, max_size=result.max_size)
    return GoodnessVerdict(good=True, counterexample=None, max_size=result.max_size)


def decide_sharp_event(sample: Subset, cap: int = DEFAULT_NODE_CAP) -> bool:
    """Whether the only maximum sum-free subset of the sample is its odd part.

    Ambient group must be cyclic of even order.  True iff no sum-free subset
    beats s0 = |sample ∩ odds| and none of size s0 contains an even element.
    """
    from .parity import decide_odd_uniqueness

    G = sample.group
    if len(G.orders) != 1 or G.n % 2:
        raise ValueError("ambient group must be cyclic of even order")
    return decide_odd_uniqueness(sample, cap=cap)


def augment_with_safe(A_sample: Subset, candidates: Subset, A: Subset) -> Subset:
    """A_sample plus every safe candidate; the union is re-verified sum-free."""
    from .gadgets import is_safe, is_sum_free

    if not A_sample.issubset(A):
        raise ValueError("A_sample must be a subset of the reference set A")
    if not candidates.isdisjoint(A):
        raise ValueError("candidates must be disjoint from the reference set")
    result = A_sample
    for x in candidates:
        if is_safe(x, A_sample, A):
            result = result.add(x)
    if not is_sum_free(result):
        raise ValueError(
            "augmented set is not sum-free: candidate set violates the "
            "structural closure precondition"
        )
    return result
