"""Orbits, cycle structure, products and odometer arithmetic."""

from __future__ import annotations

import math
from functools import lru_cache, reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.common.config import load_config
from src.common.errors import CapExceededError, InvalidWordError, SurjectivityError
from src.common.log import get_logger
from src.systems.models import CylinderSystem, FiniteSystem, ProductMetric, UnionMetric, Word, WordMetric

LOGGER = get_logger(__name__)


def orbit(system: FiniteSystem, x: int, steps: int) -> List[int]:
    """Return ``[x, Tx, ..., T^steps x]``."""
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    current = system.check_index(x)
    trajectory = [current]
    for _ in range(steps):
        current = system.mapping[current]
        trajectory.append(current)
    return trajectory


@lru_cache(maxsize=64)
def cycle_decomposition(system: FiniteSystem) -> Tuple[Tuple[int, ...], ...]:
    """Periodic cycles of the map, each starting at its least point, sorted by that point.

    For a permutation the cycles partition the space; otherwise they cover exactly
    the periodic points.
    """
    state = [0] * system.size  # 0 unseen, 1 on current path, 2 done
    cycles: List[Tuple[int, ...]] = []
    for start in range(system.size):
        if state[start]:
            continue
        path: List[int] = []
        current = start
        while state[current] == 0:
            state[current] = 1
            path.append(current)
            current = system.mapping[current]
        if state[current] == 1:
            loop = path[path.index(current) :]
            pivot = loop.index(min(loop))
            cycles.append(tuple(loop[pivot:] + loop[:pivot]))
        for point in path:
            state[point] = 2
    return tuple(sorted(cycles))


def point_period(system: FiniteSystem, x: int) -> Optional[int]:
    """Least ``p >= 1`` with ``T^p x = x``, or None for a non-periodic point."""
    system.check_index(x)
    for cycle in cycle_decomposition(system):
        if x in cycle:
            return len(cycle)
    return None


def ensure_tds(system: FiniteSystem) -> FiniteSystem:
    """Raise SurjectivityError unless the map is onto."""
    hit = set(system.mapping)
    if len(hit) != system.size:
        missed = min(set(range(system.size)) - hit)
        raise SurjectivityError(f"{system.name}: not a t.d.s., point {missed} has no preimage")
    return system


def global_period(system: FiniteSystem) -> int:
    """lcm of the cycle lengths; ``T^period`` is the identity on a finite t.d.s."""
    return reduce(math.lcm, (len(cycle) for cycle in cycle_decomposition(system)), 1)


def product_system(a: FiniteSystem, b: FiniteSystem, *, cap: int | None = None) -> FiniteSystem:
    """``(X x Y, T x S)`` with the max metric; pair ``(i, j)`` has index ``i * |Y| + j``."""
    cap = load_config().product_cap if cap is None else cap
    count = a.size * b.size
    if count > cap:
        LOGGER.warning("Product refused", extra={"points": count, "cap": cap})
        raise CapExceededError(f"product {a.name} x {b.name}", count, cap)
    width = b.size
    mapping = tuple(a.mapping[index // width] * width + b.mapping[index % width] for index in range(count))
    labels = tuple(f"({a.label(index // width)},{b.label(index % width)})" for index in range(count))
    return FiniteSystem(
        name=f"{a.name}x{b.name}",
        mapping=mapping,
        metric=ProductMetric(left=a.metric, right=b.metric),
        labels=labels,
        tds=a.tds and b.tds,
    )


def pair_index(b: FiniteSystem, i: int, j: int) -> int:
    return i * b.size + j


def split_index(b: FiniteSystem, index: int) -> Tuple[int, int]:
    return divmod(index, b.size)


def disjoint_union(a: FiniteSystem, b: FiniteSystem) -> FiniteSystem:
    """Coproduct; the points of ``b`` are shifted by ``|X|``."""
    offset = a.size
    cross = max(a.metric.diameter(), b.metric.diameter(), 1.0)
    mapping = a.mapping + tuple(image + offset for image in b.mapping)
    labels = tuple(f"{a.name}:{a.label(i)}" for i in range(a.size)) + tuple(f"{b.name}:{b.label(i)}" for i in range(b.size))
    return FiniteSystem(
        name=f"{a.name}+{b.name}",
        mapping=mapping,
        metric=UnionMetric(left=a.metric, right=b.metric, cross=cross),
        labels=labels,
        tds=a.tds and b.tds,
    )


def odometer_add(x: Sequence[int], y: Sequence[int]) -> Word:
    """Coordinatewise dyadic addition with carry, LSB first; the final carry is dropped."""
    if len(x) != len(y):
        raise InvalidWordError(f"odometer words must have equal length, got {len(x)} and {len(y)}")
    result: List[int] = []
    carry = 0
    for position, (left, right) in enumerate(zip(x, y)):
        if left not in (0, 1) or right not in (0, 1):
            raise InvalidWordError(f"odometer words are binary; bad symbol at position {position + 1}")
        total = left + right + carry
        result.append(total % 2)
        carry = total // 2
    return tuple(result)


def odometer_step(word: Sequence[int]) -> Word:
    """``T(z) = z + (1, 0, 0, ...)`` at the word's own length."""
    if not word:
        return ()
    return odometer_add(word, (1,) + (0,) * (len(word) - 1))


@lru_cache(maxsize=32)
def truncate(cyl: CylinderSystem, depth: int) -> FiniteSystem:
    """Finite shadow of a cylinder system at ``depth``.

    Odometer: the ``2^depth`` words under ``+1 mod 2^depth``. Full shift: the
    ``a^depth`` periodic words under the cyclic shift.
    """
    if depth < 1:
        raise InvalidWordError(f"truncation depth must be at least 1, got {depth}")
    size = cyl.alphabet**depth
    values = np.arange(size, dtype=np.int64)
    if cyl.kind == "odometer":
        images = (values + 1) % size
    else:
        images = values // cyl.alphabet + (values % cyl.alphabet) * cyl.alphabet ** (depth - 1)
    labels = tuple("".join(str(symbol) for symbol in cyl.value_word(value, depth)) for value in range(size))
    LOGGER.debug("Cylinder truncation built", extra={"system": cyl.name, "depth": depth, "points": size})
    return FiniteSystem(
        name=f"{cyl.name}@{depth}",
        mapping=tuple(int(image) for image in images),
        metric=WordMetric(depth=depth, alphabet=cyl.alphabet),
        labels=labels,
        tds=True,
    )


__all__ = [
    "orbit",
    "cycle_decomposition",
    "point_period",
    "ensure_tds",
    "global_period",
    "product_system",
    "pair_index",
    "split_index",
    "disjoint_union",
    "odometer_add",
    "odometer_step",
    "truncate",
]
