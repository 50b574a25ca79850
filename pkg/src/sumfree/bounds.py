"""FKG, Janson, and Chernoff bound evaluators with an exact small oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

EXACT_UNIVERSE_CAP = 20


@dataclass(frozen=True)
class SetFamily:
    """Subsets of an abstract index universe, stored as bitmasks."""

    universe_size: int
    members: Tuple[int, ...]

    def __post_init__(self) -> None:
        full = (1 << self.universe_size) - 1
        for m in self.members:
            if m == 0:
                raise ValueError("members must be nonempty")
            if m & ~full:
                raise ValueError("member exceeds the universe")

    @staticmethod
    def from_lists(universe_size: int, members: Sequence[Sequence[int]]) -> "SetFamily":
        masks = []
        for mem in members:
            bits = 0
            for i in mem:
                if not 0 <= i < universe_size:
                    raise ValueError(f"index {i} outside the universe")
                bits |= 1 << i
            masks.append(bits)
        return SetFamily(universe_size=universe_size, members=tuple(masks))

    def sizes(self) -> Tuple[int, ...]:
        return tuple(m.bit_count() for m in self.members)


def fkg_lower(F: SetFamily, p: float) -> float:
    """Lower bound prod(1 - p^|Bi|) on the probability no member is covered."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    log_total = 0.0
    for k in F.sizes():
        term = 1.0 - p**k
        if term <= 0.0:
            return 0.0
        log_total += math.log(term)
    return math.exp(log_total)


@dataclass(frozen=True)
class JansonStats:
    p: float
    M: float
    mu: float
    delta: float
    bound_main: float
    bound_mu_delta: float
    bound_ratio: float | None


def janson_stats(F: SetFamily, p: float) -> JansonStats:
    """Janson quantities; delta sums over ordered intersecting pairs i != j."""
    if not 0 <= p < 1:
        raise ValueError("p must lie in [0, 1)")
    sizes = F.sizes()
    log_M = 0.0
    degenerate = False
    for k in sizes:
        term = 1.0 - p**k
        if term <= 0.0:
            degenerate = True
            break
        log_M += math.log(term)
    M = 0.0 if degenerate else math.exp(log_M)
    mu = sum(p**k for k in sizes)
    delta = 0.0
    n = len(F.members)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if F.members[i] & F.members[j]:
                union = (F.members[i] | F.members[j]).bit_count()
                delta += p**union
    bound_a = M * math.exp(delta / (2.0 - 2.0 * p))
    bound_b = math.exp(-mu + delta / 2.0)
    bound_ratio = None
    if delta >= mu and delta > 0.0:
        bound_ratio = math.exp(-mu * mu / (2.0 * delta))
    return JansonStats(
        p=p,
        M=M,
        mu=mu,
        delta=delta,
        bound_main=min(bound_a, bound_b),
        bound_mu_delta=bound_b,
        bound_ratio=bound_ratio,
    )


def chernoff_bounds(n: int, p: float, a: float) -> Tuple[float, float]:
    """(upper, lower) tail bounds for Bin(n, p) deviations of size a."""
    if a <= 0:
        raise ValueError("a must be positive")
    pn = p * n
    if pn <= 0:
        raise ValueError("p·n must be positive")
    upper = math.exp(-a * a / (2.0 * pn) + a**3 / (2.0 * pn * pn))
    lower = math.exp(-a * a / (2.0 * pn))
    return upper, lower


def exact_avoidance_probability(F: SetFamily, p: float) -> float:
    """P(no member is fully contained in a p-random subset), exactly.

    Exhaustive weighted enumeration over all subsets of the universe.
    """
    u = F.universe_size
    if u > EXACT_UNIVERSE_CAP:
        raise ValueError(f"universe size {u} exceeds the cap {EXACT_UNIVERSE_CAP}")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    subsets = np.arange(1 << u, dtype=np.uint64)
    covered = np.zeros(1 << u, dtype=np.bool_)
    for m in F.members:
        covered |= (subsets & np.uint64(m)) == np.uint64(m)
    if p in (0.0, 1.0):
        idx = (1 << u) - 1 if p == 1.0 else 0
        return 0.0 if covered[idx] else 1.0
    pops = np.zeros(1 << u, dtype=np.int64)
    for b in range(u):
        pops += ((subsets >> np.uint64(b)) & np.uint64(1)).astype(np.int64)
    log_w = pops * math.log(p) + (u - pops) * math.log1p(-p)
    keep = ~covered
    if not keep.any():
        return 0.0
    m = log_w[keep].max()
    return float(math.exp(m) * np.exp(log_w[keep] - m).sum())
