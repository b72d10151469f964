"""Named example systems."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

import numpy as np

from src.common.errors import UnknownCatalogError
from src.common.log import get_logger
from src.systems.models import CylinderSystem, FactorMap, FiniteSystem, LineMetric

LOGGER = get_logger(__name__)

CATALOG_NAMES = ("cycle", "example33", "example45-space", "block-cycles", "odometer", "full-shift")
# The block-cycling space serves both the hyperspace and the measure examples.
BLOCK_CYCLE_NAMES = frozenset({"example33", "example45-space", "block-cycles"})

# Parameter bounds; block-cycles(m) has 2^(m+1) points.
MAX_BLOCK_DEPTH = 16
MAX_CYCLE = 1 << 16
MAX_ALPHABET = 16


def make_catalog_system(name: str, param: int = 1) -> FiniteSystem | CylinderSystem:
    """Build a catalog system.

    ``cycle``: single ``param``-cycle on ``i/param``. ``example33`` (aliases
    ``example45-space`` and ``block-cycles``): the space ``{0} u {1/k}``
    truncated after block ``param``, where each block ``1/2^n .. 1/(2^(n+1)-1)``
    is cycled forward. ``odometer``: the dyadic adding machine (``param``
    unused). ``full-shift``: shift on ``param`` symbols.
    """
    if param < 1:
        raise UnknownCatalogError(f"{name}: param must be at least 1, got {param}")
    if name == "cycle":
        return cycle(param)
    if name in BLOCK_CYCLE_NAMES:
        return block_cycles(param)
    if name == "odometer":
        return CylinderSystem(kind="odometer")
    if name == "full-shift":
        if not 2 <= param <= MAX_ALPHABET:
            raise UnknownCatalogError(f"full-shift: alphabet size must be in 2..{MAX_ALPHABET}, got {param}")
        return CylinderSystem(kind="full-shift", alphabet=param)
    raise UnknownCatalogError(f"unknown catalog system {name!r}; expected one of {', '.join(CATALOG_NAMES)}")


def cycle(period: int) -> FiniteSystem:
    if not 1 <= period <= MAX_CYCLE:
        raise UnknownCatalogError(f"cycle: period must be in 1..{MAX_CYCLE}, got {period}")
    coords = np.arange(period, dtype=float) / period
    return FiniteSystem(
        name=f"cycle({period})",
        mapping=tuple((index + 1) % period for index in range(period)),
        metric=LineMetric(coords=coords),
        labels=tuple(str(index) for index in range(period)),
    )


def block_cycles(depth: int) -> FiniteSystem:
    """Index ``k >= 1`` is the point ``1/k``; index 0 is the point 0."""
    if not 1 <= depth <= MAX_BLOCK_DEPTH:
        raise UnknownCatalogError(f"block-cycles: depth must be in 1..{MAX_BLOCK_DEPTH}, got {depth}")
    size = 2 ** (depth + 1)
    mapping = list(range(size))
    for block in range(1, depth + 1):
        first, last = 2**block, 2 ** (block + 1) - 1
        for k in range(first, last):
            mapping[k] = k + 1
        mapping[last] = first
    coords = np.array([0.0] + [1.0 / k for k in range(1, size)])
    labels = ("0",) + tuple(str(Fraction(1, k)) for k in range(1, size))
    LOGGER.debug("Block-cycle system built", extra={"depth": depth, "points": size})
    return FiniteSystem(name=f"block-cycles({depth})", mapping=tuple(mapping), metric=LineMetric(coords=coords), labels=labels)


def dyadic_points(depth: int) -> Tuple[int, ...]:
    """Indices of ``0, 1, 1/2, ..., 1/2^depth`` in ``block_cycles(depth)``."""
    return (0,) + tuple(2**n for n in range(depth + 1))


def dyadic_weights(depth: int) -> Dict[int, Fraction]:
    """``sum_{n=1}^{depth+1} 2^-n delta_{1/2^(n-1)}``, renormalized to total mass one."""
    raw = {2 ** (n - 1): Fraction(1, 2**n) for n in range(1, depth + 2)}
    total = sum(raw.values())
    return {index: weight / total for index, weight in raw.items()}


def cycle_factor(source_period: int, target_period: int) -> FactorMap:
    """``i -> i mod q`` from ``cycle(p)`` onto ``cycle(q)``; requires ``q | p``."""
    if source_period % target_period:
        raise UnknownCatalogError(f"cycle({target_period}) is not a factor of cycle({source_period})")
    source, target = cycle(source_period), cycle(target_period)
    mapping = tuple(index % target_period for index in range(source_period))
    return FactorMap(source=source, target=target, mapping=mapping).validate()


__all__ = [
    "CATALOG_NAMES",
    "BLOCK_CYCLE_NAMES",
    "make_catalog_system",
    "cycle",
    "block_cycles",
    "dyadic_points",
    "dyadic_weights",
    "cycle_factor",
]
