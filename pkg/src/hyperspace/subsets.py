"""The induced system (K(X), T_K) on finite subsets."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.common.config import load_config
from src.common.errors import CapExceededError, EmptySetError, HostMismatchError
from src.common.log import get_logger
from src.systems.dynamics import truncate
from src.systems.models import CylinderSystem, FiniteSystem

LOGGER = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class FiniteSubset:
    """A point of K(X): nonempty, canonically sorted set of point indices."""

    host: str
    elements: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise EmptySetError(f"{self.host}: subsets of the hyperspace are nonempty")
        if list(self.elements) != sorted(set(self.elements)):
            raise ValueError("elements must be sorted and distinct; use FiniteSubset.of")

    @classmethod
    def of(cls, system: FiniteSystem, points: Iterable[int]) -> "FiniteSubset":
        elements = tuple(sorted({system.check_index(point) for point in points}))
        return cls(host=system.name, elements=elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, point: object) -> bool:
        return point in self.elements

    def union(self, other: "FiniteSubset") -> "FiniteSubset":
        _check_same_host(self, other)
        return FiniteSubset(host=self.host, elements=tuple(sorted(set(self.elements) | set(other.elements))))

    def to_list(self) -> List[int]:
        return list(self.elements)


@dataclass(frozen=True, slots=True)
class VietorisBasisElement:
    """``<U_1, ..., U_n>``; any subset is open in a finite space."""

    host: str
    opens: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.opens:
            raise EmptySetError("a Vietoris basis element needs at least one open set")
        for position, opened in enumerate(self.opens, start=1):
            if not opened:
                raise EmptySetError(f"U_{position} is empty")

    @classmethod
    def of(cls, system: FiniteSystem, opens: Sequence[Iterable[int]]) -> "VietorisBasisElement":
        return cls(
            host=system.name,
            opens=tuple(tuple(sorted({system.check_index(point) for point in opened})) for opened in opens),
        )


def _check_same_host(a: FiniteSubset | VietorisBasisElement, b: FiniteSubset | VietorisBasisElement) -> None:
    if a.host != b.host:
        raise HostMismatchError(f"values live on different systems: {a.host} vs {b.host}")


def _check_host(system: FiniteSystem, value: FiniteSubset) -> None:
    if value.host != system.name:
        raise HostMismatchError(f"subset lives on {value.host}, not {system.name}")


def hausdorff_distance(system: FiniteSystem, a: FiniteSubset, b: FiniteSubset) -> float:
    """max of the two directed max-min distances."""
    _check_host(system, a)
    _check_same_host(a, b)
    matrix = system.metric.submatrix(a.elements, b.elements)
    return float(max(np.max(np.min(matrix, axis=1)), np.max(np.min(matrix, axis=0))))


def hausdorff_matrix(system: FiniteSystem, subsets: Sequence[FiniteSubset]) -> np.ndarray:
    """Pairwise Hausdorff distances of ``subsets``."""
    size = len(subsets)
    result = np.zeros((size, size))
    for i in range(size):
        for j in range(i + 1, size):
            result[i, j] = result[j, i] = hausdorff_distance(system, subsets[i], subsets[j])
    return result


def induced_map_K(system: FiniteSystem, a: FiniteSubset) -> FiniteSubset:
    """``T_K(A) = TA``."""
    _check_host(system, a)
    return FiniteSubset(host=a.host, elements=tuple(sorted({system.mapping[point] for point in a.elements})))


def vietoris_contains(a: FiniteSubset, v: VietorisBasisElement) -> bool:
    """True iff ``a`` lies in the union of the opens and meets every one of them."""
    _check_same_host(a, v)
    members = set(a.elements)
    covered = set().union(*(set(opened) for opened in v.opens))
    if not members <= covered:
        return False
    return all(members.intersection(opened) for opened in v.opens)


def count_Kn(size: int, n: int) -> int:
    return sum(comb(size, k) for k in range(1, min(n, size) + 1))


def enumerate_Kn(system: FiniteSystem, n: int, *, cap: int | None = None) -> List[FiniteSubset]:
    """All nonempty subsets of cardinality at most ``n``, by size then lexicographically."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    cap = load_config().subset_cap if cap is None else cap
    total = count_Kn(system.size, n)
    if total > cap:
        LOGGER.warning("K_n enumeration refused", extra={"system": system.name, "n": n, "count": total, "cap": cap})
        raise CapExceededError(f"K_{n}({system.name})", total, cap)
    subsets = [
        FiniteSubset(host=system.name, elements=chosen)
        for k in range(1, min(n, system.size) + 1)
        for chosen in combinations(range(system.size), k)
    ]
    LOGGER.info("K_n enumerated", extra={"system": system.name, "n": n, "count": len(subsets)})
    return subsets


def singleton_embedding(system: FiniteSystem) -> List[FiniteSubset]:
    """The isometric copy ``x -> {x}`` of X inside K(X)."""
    return [FiniteSubset(host=system.name, elements=(point,)) for point in range(system.size)]


def period_of_set(system: FiniteSystem, a: FiniteSubset, bound: int) -> Optional[int]:
    """Least ``p <= bound`` with ``T_K^p(a) = a``, else None."""
    if bound < 1:
        raise ValueError(f"bound must be at least 1, got {bound}")
    current = a
    for step in range(1, bound + 1):
        current = induced_map_K(system, current)
        if current == a:
            return step
    return None


def cylinder_points(cyl: CylinderSystem, depth: int, word: Sequence[int]) -> FiniteSubset:
    """The cylinder ``[word]`` as a point of K(truncate(cyl, depth))."""
    host = truncate(cyl, depth)
    return FiniteSubset(host=host.name, elements=cyl.cylinder_indices(depth, word))


__all__ = [
    "FiniteSubset",
    "VietorisBasisElement",
    "hausdorff_distance",
    "hausdorff_matrix",
    "induced_map_K",
    "vietoris_contains",
    "count_Kn",
    "enumerate_Kn",
    "singleton_embedding",
    "period_of_set",
    "cylinder_points",
]
