"""Finite Abelian group arithmetic, classification, and homomorphism enumeration.

A group is given by a sequence of cyclic orders (m1, ..., mk); elements are
dense indices 0..n-1 in mixed radix over that decomposition, so group
operations are O(k) and subsets can be plain bit arrays over element indices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterator, Sequence, Tuple


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class GroupSpec:
    """A finite Abelian group as a product of cyclic groups.

    ``orders`` may be empty (trivial group).  Element index e decodes to
    residues (r1, ..., rk) with ri = (e // stride_i) % m_i.
    """

    orders: Tuple[int, ...]
    n: int = field(init=False)
    radix_offsets: Tuple[int, ...] = field(init=False)

    def __init__(self, orders: Sequence[int]):
        orders = tuple(int(m) for m in orders)
        if any(m < 2 for m in orders):
            raise ValueError("every cyclic order must be >= 2")
        strides = []
        acc = 1
        for m in orders:
            strides.append(acc)
            acc *= m
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "n", acc)
        object.__setattr__(self, "radix_offsets", tuple(strides))

    def decode(self, e: int) -> Tuple[int, ...]:
        self._check(e)
        return tuple(
            (e // s) % m for s, m in zip(self.radix_offsets, self.orders)
        )

    def encode(self, residues: Sequence[int]) -> int:
        if len(residues) != len(self.orders):
            raise ValueError("residue tuple has wrong length")
        e = 0
        for r, s, m in zip(residues, self.radix_offsets, self.orders):
            if not 0 <= r < m:
                raise ValueError(f"residue {r} out of range for order {m}")
            e += r * s
        return e

    def _check(self, e: int) -> None:
        if not 0 <= e < self.n:
            raise IndexError(f"element index {e} out of range for order {self.n}")

    def elements(self) -> range:
        return range(self.n)

    def literal(self) -> str:
        if not self.orders:
            return "Z1"
        parts: list[str] = []
        i = 0
        while i < len(self.orders):
            j = i
            while j < len(self.orders) and self.orders[j] == self.orders[i]:
                j += 1
            rep = j - i
            parts.append(f"Z{self.orders[i]}" + (f"^{rep}" if rep > 1 else ""))
            i = j
        return "x".join(parts)

    def __str__(self) -> str:
        return self.literal()


def element_add(G: GroupSpec, a: int, b: int) -> int:
    G._check(a)
    G._check(b)
    out = 0
    for s, m in zip(G.radix_offsets, G.orders):
        out += (((a // s) + (b // s)) % m) * s
    return out


def element_neg(G: GroupSpec, a: int) -> int:
    G._check(a)
    out = 0
    for s, m in zip(G.radix_offsets, G.orders):
        out += ((m - (a // s) % m) % m) * s
    return out


def element_sub(G: GroupSpec, a: int, b: int) -> int:
    return element_add(G, a, element_neg(G, b))


@dataclass(frozen=True)
class GroupType:
    """Classification tag: 'I' (with prime q), 'II', or 'III' (with exponent m)."""

    tag: str
    q: int | None = None
    m: int | None = None

    def __str__(self) -> str:
        if self.tag == "I":
            return f"I({self.q})"
        if self.tag == "III":
            return f"III(exponent {self.m})"
        return "II"


def classify(G: GroupSpec) -> GroupType:
    """Classify by the prime divisors of |G| modulo 3."""
    if G.n < 2:
        raise ValueError("trivial group has no classification")
    primes = sorted(_factorize(G.n))
    for p in primes:
        if p % 3 == 2:
            return GroupType("I", q=p)
    if G.n % 3 == 0:
        return GroupType("II")
    return GroupType("III", m=lcm(*G.orders))


def mu(G: GroupSpec) -> Fraction:
    """Exact density of a maximum sum-free subset."""
    t = classify(G)
    if t.tag == "I":
        return Fraction(1, 3) + Fraction(1, 3 * t.q)
    if t.tag == "II":
        return Fraction(1, 3)
    return Fraction(1, 3) - Fraction(1, 3 * t.m)


@dataclass(frozen=True)
class HomToZq:
    """A homomorphism G -> Z_q given by the images of the cyclic generators."""

    q: int
    images: Tuple[int, ...]

    def __call__(self, G: GroupSpec, e: int) -> int:
        total = 0
        for c, s, m in zip(self.images, G.radix_offsets, G.orders):
            total += ((e // s) % m) * c
        return total % self.q

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.images)


def enumerate_homs_to_Zq(G: GroupSpec, q: int) -> list[HomToZq]:
    """All homomorphisms G -> Z_q, including the zero map.

    The image of the i-th generator is free in Z_q when q | m_i and must be
    0 otherwise; the count is q**t with t = #{i : q | m_i}.
    """
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    free = [m % q == 0 for m in G.orders]
    homs = [HomToZq(q, ())]
    for is_free in free:
        choices = range(q) if is_free else (0,)
        homs = [
            HomToZq(q, h.images + (c,)) for h in homs for c in choices
        ]
    return homs


def hom_values(G: GroupSpec, phi: HomToZq) -> list[int]:
    """phi(e) for every element index e, in index order."""
    vals = [0] * G.n
    for e in range(G.n):
        total = 0
        for c, s, m in zip(phi.images, G.radix_offsets, G.orders):
            total += ((e // s) % m) * c
        vals[e] = total % phi.q
    return vals


def kernel_subgroup(G: GroupSpec, phi: HomToZq):
    """The index-q subgroup ker(phi), as a Subset.  Rejects the zero map."""
    from .subsets import Subset

    if phi.is_zero():
        raise ValueError("zero homomorphism: kernel is the whole group")
    vals = hom_values(G, phi)
    return Subset.from_elements(G, [e for e, v in enumerate(vals) if v == 0])


def _partitions(k: int) -> Iterator[Tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    for first in range(k, 0, -1):
        for rest in _partitions(k - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_abelian_groups(order: int) -> Tuple[GroupSpec, ...]:
    """One GroupSpec per isomorphism class of Abelian groups of the given order.

    Canonical form is the primary decomposition: prime-power cyclic factors,
    primes ascending, exponents descending within a prime.
    """
    if order < 2:
        raise ValueError("order must be >= 2")
    factor_lists: list[list[Tuple[int, ...]]] = []
    for p, k in sorted(_factorize(order).items()):
        factor_lists.append([tuple(p**e for e in part) for part in _partitions(k)])
    specs: list[GroupSpec] = [GroupSpec(())]
    for options in factor_lists:
        specs = [
            GroupSpec(s.orders + opt) for s in specs for opt in options
        ]
    return tuple(specs)


_LITERAL_TERM = re.compile(r"^z(\d+)(?:\^(\d+))?$", re.IGNORECASE)


def parse_group_literal(text: str) -> GroupSpec:
    """Parse literals like "Z10", "Z4xZ3", "Z2^5" (case-insensitive)."""
    orders: list[int] = []
    for term in text.strip().split("x"):
        m = _LITERAL_TERM.match(term.strip())
        if not m:
            raise ValueError(f"cannot parse group literal term {term!r}")
        base = int(m.group(1))
        rep = int(m.group(2)) if m.group(2) else 1
        if base < 2 or rep < 1:
            raise ValueError(f"invalid group literal term {term!r}")
        orders.extend([base] * rep)
    if not orders:
        raise ValueError("empty group literal")
    return GroupSpec(orders)


def primary_decomposition(G: GroupSpec) -> GroupSpec:
    """Isomorphic group in canonical primary (prime-power) form."""
    factors: list[Tuple[int, int]] = []
    for m in G.orders:
        for p, k in sorted(_factorize(m).items()):
            factors.append((p, k))
    factors.sort(key=lambda pk: (pk[0], -pk[1]))
    return GroupSpec(tuple(p**k for p, k in factors))
