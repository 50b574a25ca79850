"""Maximum sum-free families: enumeration, structure checks, stability."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .gadgets import count_schur_pairs, is_sum_free
from .groups import (
    GroupSpec,
    HomToZq,
    classify,
    element_add,
    enumerate_homs_to_Zq,
    hom_values,
    mu,
    parse_group_literal,
)
from .solver import max_sum_free
from .subsets import Subset

BRUTE_FORCE_CAP = 30


@dataclass(frozen=True)
class SFCatalog:
    """Deduplicated family of maximum-size sum-free sets with provenance."""

    group: GroupSpec
    sets: Tuple[Subset, ...]
    provenance: Tuple[Optional[HomToZq], ...]
    method: str

    def __post_init__(self) -> None:
        if len(self.sets) != len(self.provenance):
            raise ValueError("provenance length mismatch")

    def __len__(self) -> int:
        return len(self.sets)

    def to_json(self) -> str:
        return json.dumps(
            {
                "group": self.group.literal(),
                "method": self.method,
                "sets": [s.elements() for s in self.sets],
            }
        )

    @staticmethod
    def from_json(text: str) -> "SFCatalog":
        data = json.loads(text)
        G = parse_group_literal(data["group"])
        sets = tuple(Subset.from_elements(G, els) for els in data["sets"])
        return SFCatalog(
            group=G,
            sets=sets,
            provenance=(None,) * len(sets),
            method=data["method"],
        )


def _sumset_union(A: Subset) -> Subset:
    G = A.group
    bits = 0
    elems = A.elements()
    for a in elems:
        for b in elems:
            bits |= 1 << element_add(G, a, b)
    return A | Subset(G, bits)


def enumerate_sf_type1(G: GroupSpec) -> SFCatalog:
    """All maximum sum-free sets of a type I(q) group via its homs to Z_q.

    Each nonzero hom contributes the preimage of the middle interval
    {k+1, ..., 2k+1} of Z_q (q = 3k+2); duplicates are merged, provenance
    keeps one producing hom per distinct set.  Every member is verified.
    """
    t = classify(G)
    if t.tag != "I":
        raise ValueError("group is not type I")
    q = t.q
    k = (q - 2) // 3
    target_size = mu(G) * G.n
    assert target_size.denominator == 1
    target = int(target_size)
    interval = set(range(k + 1, 2 * k + 2))
    seen: dict[int, HomToZq] = {}
    for phi in enumerate_homs_to_Zq(G, q):
        if phi.is_zero():
            continue
        vals = hom_values(G, phi)
        bits = 0
        for e, v in enumerate(vals):
            if v in interval:
                bits |= 1 << e
        if bits not in seen:
            seen[bits] = phi
    sets: List[Subset] = []
    provenance: List[Optional[HomToZq]] = []
    for bits in sorted(seen):
        A = Subset(G, bits)
        if len(A) != target:
            raise AssertionError("hom preimage has the wrong size")
        if not is_sum_free(A):
            raise AssertionError("hom preimage is not sum-free")
        if _sumset_union(A).bits != (1 << G.n) - 1:
            raise AssertionError("hom preimage misses A ∪ (A+A) = G")
        sets.append(A)
        provenance.append(seen[bits])
    return SFCatalog(group=G, sets=tuple(sets), provenance=tuple(provenance), method="hom-based")


def enumerate_sf_bruteforce(G: GroupSpec, size_cap: int = BRUTE_FORCE_CAP) -> SFCatalog:
    """All maximum sum-free sets by exhaustive branch-and-bound enumeration."""
    if G.n > size_cap:
        raise ValueError(
            f"group order {G.n} exceeds the brute-force cap {size_cap}"
        )
    full = Subset.full(G)
    result = max_sum_free(full, enumerate_optima=True, cap=10**8)
    if not result.enumeration_complete:
        raise RuntimeError("brute-force enumeration hit the node cap")
    sets = tuple(sorted(result.optima, key=lambda s: s.bits))
    return SFCatalog(
        group=G,
        sets=sets,
        provenance=(None,) * len(sets),
        method="brute-force",
    )


def dilation_catalog_z3q(G: GroupSpec) -> SFCatalog:
    """Extremal catalog for Z_3q (q prime, type II): residue classes mod 3
    and all unit dilations of the middle interval, each verified maximum.

    This does not prove completeness; it collects the known extremal shapes
    needed as a comparison family at orders beyond brute force.
    """
    n = G.n
    if len(G.orders) != 1 or n % 3:
        raise ValueError("expects a cyclic group of order divisible by 3")
    q = n // 3
    target_size = mu(G) * n
    assert target_size.denominator == 1
    target = int(target_size)
    candidates: set[int] = set()
    for cls in (1, 2):
        bits = 0
        for e in range(cls, n, 3):
            bits |= 1 << e
        candidates.add(bits)
    # The middle interval {q+1, ..., 2q} is sum-free of maximum size q.
    base = list(range(q + 1, 2 * q + 1))
    for d in range(1, n):
        if math.gcd(d, n) != 1:
            continue
        bits = 0
        for e in base:
            bits |= 1 << (e * d % n)
        candidates.add(bits)
    sets: List[Subset] = []
    for bits in sorted(candidates):
        A = Subset(G, bits)
        if len(A) == target and is_sum_free(A):
            sets.append(A)
    return SFCatalog(
        group=G,
        sets=tuple(sets),
        provenance=(None,) * len(sets),
        method="dilation-family",
    )


@dataclass(frozen=True)
class StabilityVerdict:
    branch: str  # "close" or "many-triples"
    epsilon: Fraction
    close_to: Optional[Subset] = None
    distance: Optional[int] = None
    triple_count: Optional[int] = None


def saturation_check(A: Subset, epsilon: Fraction) -> StabilityVerdict:
    """Either a sum-free A' ⊆ A within ε·n deletions, or the Schur-pair count.

    Branch (a) is decided exactly with the solver; ties go to branch (a).
    """
    G = A.group
    n = G.n
    if len(A) * 3 < n * (1 + 3 * epsilon):
        raise ValueError("precondition |A| >= (1/3 + eps)·n violated")
    budget = int(epsilon * n)
    result = max_sum_free(A, cap=10**7)
    distance = len(A) - result.max_size
    if distance <= budget:
        return StabilityVerdict(
            branch="close",
            epsilon=epsilon,
            close_to=result.witness,
            distance=distance,
        )
    return StabilityVerdict(
        branch="many-triples",
        epsilon=epsilon,
        triple_count=count_schur_pairs(A),
    )


def stability_check(A: Subset, epsilon: Fraction, catalog: SFCatalog) -> StabilityVerdict:
    """Distance from A to the extremal catalog, or the Schur-pair count."""
    G = A.group
    t = classify(G)
    if t.tag != "I":
        raise ValueError("stability check applies to type I groups")
    q = t.q
    if not (0 < epsilon < Fraction(1, 9 * q * q + 9 * q)):
        raise ValueError("epsilon outside (0, 1/(9q^2+9q))")
    if len(A) < (mu(G) - epsilon) * G.n:
        raise ValueError("precondition |A| >= (mu - eps)·n violated")
    budget = epsilon * G.n
    best: Optional[Tuple[int, Subset]] = None
    for member in catalog.sets:
        d = len(A - member)
        if best is None or d < best[0]:
            best = (d, member)
    if best is not None and best[0] <= budget:
        return StabilityVerdict(
            branch="close", epsilon=epsilon, close_to=best[1], distance=best[0]
        )
    return StabilityVerdict(
        branch="many-triples", epsilon=epsilon, triple_count=count_schur_pairs(A)
    )
