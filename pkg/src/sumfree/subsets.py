"""Dense bit-indexed subsets of a group's element range."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .groups import GroupSpec


@dataclass(frozen=True)
class Subset:
    """A subset of a group's elements, stored as a bitmask over indices."""

    group: GroupSpec
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.group.n:
            raise ValueError("bitmask out of range for the group's order")

    @staticmethod
    def empty(G: GroupSpec) -> "Subset":
        return Subset(G, 0)

    @staticmethod
    def full(G: GroupSpec) -> "Subset":
        return Subset(G, (1 << G.n) - 1)

    @staticmethod
    def from_elements(G: GroupSpec, elements: Iterable[int]) -> "Subset":
        bits = 0
        for e in elements:
            if not 0 <= e < G.n:
                raise IndexError(f"element {e} out of range")
            bits |= 1 << e
        return Subset(G, bits)

    @staticmethod
    def from_mask(G: GroupSpec, mask: np.ndarray) -> "Subset":
        if mask.shape != (G.n,):
            raise ValueError("mask length mismatch")
        bits = 0
        for e in np.flatnonzero(mask):
            bits |= 1 << int(e)
        return Subset(G, bits)

    def __contains__(self, e: int) -> bool:
        return 0 <= e < self.group.n and bool(self.bits >> e & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            lsb = bits & -bits
            yield lsb.bit_length() - 1
            bits ^= lsb

    def elements(self) -> list[int]:
        return list(self)

    def _coerce(self, other: "Subset") -> None:
        if other.group != self.group:
            raise ValueError("subsets belong to different groups")

    def union(self, other: "Subset") -> "Subset":
        self._coerce(other)
        return Subset(self.group, self.bits | other.bits)

    def intersection(self, other: "Subset") -> "Subset":
        self._coerce(other)
        return Subset(self.group, self.bits & other.bits)

    def difference(self, other: "Subset") -> "Subset":
        self._coerce(other)
        return Subset(self.group, self.bits & ~other.bits)

    def complement(self) -> "Subset":
        return Subset(self.group, ~self.bits & ((1 << self.group.n) - 1))

    def issubset(self, other: "Subset") -> bool:
        self._coerce(other)
        return self.bits & ~other.bits == 0

    def isdisjoint(self, other: "Subset") -> bool:
        self._coerce(other)
        return self.bits & other.bits == 0

    def add(self, e: int) -> "Subset":
        if not 0 <= e < self.group.n:
            raise IndexError(f"element {e} out of range")
        return Subset(self.group, self.bits | 1 << e)

    def remove(self, e: int) -> "Subset":
        return Subset(self.group, self.bits & ~(1 << e))

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def to_mask(self) -> np.ndarray:
        mask = np.zeros(self.group.n, dtype=np.bool_)
        for e in self:
            mask[e] = True
        return mask

    def to_array(self) -> np.ndarray:
        return np.fromiter(self, dtype=np.int64, count=len(self))

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self) + "}"
