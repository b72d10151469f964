"""Joinings of finite systems, disjointness and the hyperspace projection inequality."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.common.config import load_config
from src.common.errors import CapExceededError, EmptySetError, HostMismatchError
from src.common.log import get_logger
from src.hyperspace.subsets import FiniteSubset, induced_map_K
from src.systems.dynamics import cycle_decomposition, ensure_tds, product_system, split_index
from src.systems.models import FiniteSystem

LOGGER = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class Joining:
    """Closed invariant subset of ``X x Y`` projecting onto both factors, as pair indices."""

    left: str
    right: str
    left_size: int
    right_size: int
    elements: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise EmptySetError("a joining is nonempty")

    @property
    def is_full(self) -> bool:
        return len(self.elements) == self.left_size * self.right_size

    def pairs(self) -> List[Tuple[int, int]]:
        return [divmod(index, self.right_size) for index in self.elements]

    def to_payload(self) -> List[int]:
        return list(self.elements)


def orbit_closure(product: FiniteSystem, seed: int) -> FiniteSubset:
    """Forward orbit of ``seed``; on a finite space it is already closed."""
    visited = []
    seen = set()
    current = product.check_index(seed)
    while current not in seen:
        seen.add(current)
        visited.append(current)
        current = product.mapping[current]
    return FiniteSubset.of(product, visited)


def is_joining(x: FiniteSystem, y: FiniteSystem, elements: Tuple[int, ...]) -> bool:
    """Nonempty, ``T x S`` invariant, and onto both factors."""
    if not elements:
        return False
    members = set(elements)
    lefts, rights = set(), set()
    for index in elements:
        i, j = divmod(index, y.size)
        image = x.mapping[i] * y.size + y.mapping[j]
        if image not in members:
            return False
        lefts.add(i)
        rights.add(j)
    return len(lefts) == x.size and len(rights) == y.size


def _product_orbits(x: FiniteSystem, y: FiniteSystem, cap: Optional[int], orbit_cap: Optional[int]):
    ensure_tds(x)
    ensure_tds(y)
    config = load_config()
    cap = config.joining_cap if cap is None else cap
    orbit_cap = config.orbit_union_cap if orbit_cap is None else orbit_cap
    count = x.size * y.size
    if count > cap:
        LOGGER.warning("Joining enumeration refused", extra={"left": x.name, "right": y.name, "points": count, "cap": cap})
        raise CapExceededError(f"{x.name} x {y.name}", count, cap)
    product = product_system(x, y)
    orbits = cycle_decomposition(product)
    if len(orbits) > orbit_cap:
        LOGGER.warning("Joining enumeration refused", extra={"left": x.name, "right": y.name, "orbits": len(orbits), "cap": orbit_cap})
        raise CapExceededError(f"product orbits of {x.name} x {y.name}", len(orbits), orbit_cap)
    return product, orbits


def _make(x: FiniteSystem, y: FiniteSystem, elements) -> Joining:
    return Joining(left=x.name, right=y.name, left_size=x.size, right_size=y.size, elements=tuple(sorted(elements)))


def enumerate_joinings(
    x: FiniteSystem, y: FiniteSystem, *, cap: Optional[int] = None, orbit_cap: Optional[int] = None
) -> List[Joining]:
    """Every union of product orbits projecting onto both factors, smallest first; ``X x Y`` comes last."""
    _, orbits = _product_orbits(x, y, cap, orbit_cap)
    full_left, full_right = (1 << x.size) - 1, (1 << y.size) - 1
    left_masks, right_masks = [], []
    for orbit in orbits:
        left_mask = right_mask = 0
        for index in orbit:
            i, j = split_index(y, index)
            left_mask |= 1 << i
            right_mask |= 1 << j
        left_masks.append(left_mask)
        right_masks.append(right_mask)

    # Layer k extends every union of the first k orbits with orbit k.
    unions_left, unions_right = [0], [0]
    for position in range(len(orbits)):
        unions_left += [mask | left_masks[position] for mask in unions_left]
        unions_right += [mask | right_masks[position] for mask in unions_right]

    joinings = []
    for subset in range(1, len(unions_left)):
        if unions_left[subset] == full_left and unions_right[subset] == full_right:
            chosen = [point for bit, orbit in enumerate(orbits) if subset >> bit & 1 for point in orbit]
            joinings.append(_make(x, y, chosen))
    joinings.sort(key=lambda joining: (len(joining.elements), joining.elements))
    LOGGER.info(
        "Joinings enumerated",
        extra={"left": x.name, "right": y.name, "orbits": len(orbits), "joinings": len(joinings)},
    )
    return joinings


def minimal_joinings(x: FiniteSystem, y: FiniteSystem, *, cap: Optional[int] = None) -> List[Joining]:
    """Single product orbits projecting onto both factors."""
    _, orbits = _product_orbits(x, y, cap, None)
    found = [_make(x, y, orbit) for orbit in orbits if is_joining(x, y, tuple(sorted(orbit)))]
    return sorted(found, key=lambda joining: joining.elements)


@dataclass(slots=True)
class DisjointnessResult:
    disjoint: bool
    joinings: int
    witness: Optional[Joining] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "disjoint": self.disjoint,
            "joinings": self.joinings,
            "witness": self.witness.to_payload() if self.witness else None,
            "witness_size": len(self.witness.elements) if self.witness else 0,
        }


def is_disjoint(x: FiniteSystem, y: FiniteSystem, *, cap: Optional[int] = None) -> DisjointnessResult:
    """Disjoint iff ``X x Y`` is the only joining; otherwise the smallest proper joining is the witness."""
    joinings = enumerate_joinings(x, y, cap=cap)
    proper = [joining for joining in joinings if not joining.is_full]
    return DisjointnessResult(disjoint=not proper, joinings=len(joinings), witness=proper[0] if proper else None)


@dataclass(slots=True)
class ProjectionCheck:
    holds: bool
    comparisons: int
    violation: Optional[Tuple[int, int]] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def projection_inequality_check(system: FiniteSystem, a: FiniteSubset, u: int, horizon: int) -> ProjectionCheck:
    """``rho(T^n x, u) <= d_H(T_K^n a, {u})`` for every ``x`` in ``a`` and ``n <= horizon``.

    A violation is reported as ``(n, x)``.
    """
    if a.host != system.name:
        raise HostMismatchError(f"subset lives on {a.host}, not {system.name}")
    if horizon < 0:
        raise ValueError(f"horizon must be nonnegative, got {horizon}")
    system.check_index(u)
    mapping = np.asarray(system.mapping, dtype=np.int64)
    starts = np.asarray(a.elements, dtype=np.int64)
    points = starts.copy()
    image = a
    comparisons = 0
    for n in range(horizon + 1):
        right = float(system.metric.submatrix(image.elements, [u]).max())
        left = system.metric.submatrix(points, [u])[:, 0]
        comparisons += left.size
        broken = np.flatnonzero(left > right)
        if broken.size:
            return ProjectionCheck(holds=False, comparisons=comparisons, violation=(n, int(starts[broken[0]])))
        points = mapping[points]
        image = induced_map_K(system, image)
    return ProjectionCheck(holds=True, comparisons=comparisons)


__all__ = [
    "Joining",
    "DisjointnessResult",
    "ProjectionCheck",
    "orbit_closure",
    "is_joining",
    "enumerate_joinings",
    "minimal_joinings",
    "is_disjoint",
    "projection_inequality_check",
]
