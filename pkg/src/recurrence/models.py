"""Return-time sets: windowed and exact eventually periodic forms."""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import asdict, dataclass
from numbers import Integral
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple


@dataclass(frozen=True, slots=True)
class TimeSet:
    """A subset of ``[0, window)`` observed through a finite window."""

    window: int
    members: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError(f"window must be at least 1, got {self.window}")
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("members must be sorted and distinct; use TimeSet.of")
        if self.members and not (0 <= self.members[0] and self.members[-1] < self.window):
            raise ValueError(f"members must lie in [0, {self.window})")

    @classmethod
    def of(cls, members: Iterable[int], window: int) -> "TimeSet":
        return cls(window=window, members=tuple(sorted({int(n) for n in members})))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, n: object) -> bool:
        if not isinstance(n, Integral):
            return False
        position = bisect_left(self.members, n)
        return position < len(self.members) and self.members[position] == n

    def intersection(self, other: "TimeSet") -> "TimeSet":
        window = min(self.window, other.window)
        common = set(self.members) & set(other.members)
        return TimeSet.of((n for n in common if n < window), window)

    def to_csv(self) -> str:
        return "".join(f"{n}\n" for n in self.members)

    def to_payload(self) -> Dict[str, Any]:
        return {"window": self.window, "members": list(self.members)}


@dataclass(frozen=True, slots=True)
class ResidueTimeSet:
    """Eventually periodic subset of the nonnegative integers.

    ``n`` is a member iff ``n mod modulus`` is in ``residues``, with membership
    flipped for every ``n`` in ``prefix_exceptions``.
    """

    modulus: int
    residues: FrozenSet[int]
    prefix_exceptions: FrozenSet[int] = frozenset()

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be at least 1, got {self.modulus}")
        if any(not 0 <= residue < self.modulus for residue in self.residues):
            raise ValueError(f"residues must lie in 0..{self.modulus - 1}")
        if any(n < 0 for n in self.prefix_exceptions):
            raise ValueError("prefix exceptions must be nonnegative")

    @property
    def threshold(self) -> int:
        """Every ``n >= threshold`` follows the residue rule."""
        return max(self.prefix_exceptions) + 1 if self.prefix_exceptions else 0

    def _follows_rule(self, n: int) -> bool:
        return n % self.modulus in self.residues

    def contains(self, n: int) -> bool:
        if n < 0:
            return False
        return self._follows_rule(n) != (n in self.prefix_exceptions)

    __contains__ = contains

    def is_empty(self) -> bool:
        return self.first_member() is None

    def first_member(self, start: int = 0) -> Optional[int]:
        limit = max(start, self.threshold) + self.modulus
        for n in range(max(start, 0), limit):
            if self.contains(n):
                return n
        return None

    def intersection(self, other: "ResidueTimeSet") -> "ResidueTimeSet":
        modulus = self.modulus * other.modulus // math.gcd(self.modulus, other.modulus)
        residues = frozenset(
            r for r in range(modulus) if r % self.modulus in self.residues and r % other.modulus in other.residues
        )
        horizon = max(self.threshold, other.threshold)
        exceptions = frozenset(
            n
            for n in range(horizon)
            if (self.contains(n) and other.contains(n)) != (n % modulus in residues)
        )
        return ResidueTimeSet(modulus=modulus, residues=residues, prefix_exceptions=exceptions)

    def is_syndetic(self) -> bool:
        """Bounded gaps, exactly: some residue class survives."""
        return bool(self.residues)

    def is_thick(self) -> bool:
        """Arbitrarily long runs, exactly: every residue class is present."""
        return len(self.residues) == self.modulus

    def to_window(self, window: int) -> TimeSet:
        return TimeSet.of((n for n in range(window) if self.contains(n)), window)

    def to_payload(self) -> Dict[str, Any]:
        return {
            "modulus": self.modulus,
            "residues": sorted(self.residues),
            "prefix_exceptions": sorted(self.prefix_exceptions),
        }


@dataclass(slots=True)
class SyndeticGap:
    max_gap: int
    covers_window: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(slots=True)
class IPSampleResult:
    generators: List[int]
    intersects: bool
    witness: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(slots=True)
class Proximality:
    min_dist: float
    proximal: bool
    first_hit: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(slots=True)
class WeakMixingResult:
    """Outcome of the ``N(U,U) n N(U,V)`` criterion over cylinder pairs."""

    passed: bool
    pairs_checked: int
    witnesses: List[Tuple[Tuple[int, ...], Tuple[int, ...], int]]
    counterexample: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "pairs_checked": self.pairs_checked,
            "counterexample": [list(word) for word in self.counterexample] if self.counterexample else None,
            "sample_witness": [list(self.witnesses[0][0]), list(self.witnesses[0][1]), self.witnesses[0][2]]
            if self.witnesses
            else None,
        }


__all__ = [
    "TimeSet",
    "ResidueTimeSet",
    "SyndeticGap",
    "IPSampleResult",
    "Proximality",
    "WeakMixingResult",
]
