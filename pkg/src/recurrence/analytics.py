"""In-window estimates of syndeticity, thickness, densities and IP* evidence.

Every verdict here holds inside the observation window only; exact verdicts
come from ResidueTimeSet.
"""

from __future__ import annotations

from typing import List, Sequence

import numpy as np

from src.common.errors import CapExceededError, EmptySetError, WindowOverflowError
from src.common.log import get_logger
from src.recurrence.models import IPSampleResult, SyndeticGap, TimeSet

LOGGER = get_logger(__name__)

MAX_GENERATORS = 20
# Subset sums stay exact in int64 below this bound.
MAX_FS_SUM = 2**62


def _indicator(s: TimeSet) -> np.ndarray:
    flags = np.zeros(s.window, dtype=np.int64)
    flags[list(s.members)] = 1
    return flags


def syndetic_gap(s: TimeSet) -> SyndeticGap:
    """Largest gap between consecutive members, counting from 0 and up to the window end."""
    if not s.members:
        raise EmptySetError("syndetic gap of an empty time set")
    marks = np.asarray((0,) + s.members + (s.window,), dtype=np.int64)
    gaps = np.diff(marks)
    gaps = gaps[gaps > 0]
    max_gap = int(gaps.max())
    return SyndeticGap(max_gap=max_gap, covers_window=max_gap < s.window)


def max_run(s: TimeSet) -> int:
    """Length of the longest block of consecutive members."""
    if not s.members:
        return 0
    members = np.asarray(s.members, dtype=np.int64)
    breaks = np.flatnonzero(np.diff(members) != 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks + 1, [members.size]))
    return int((ends - starts).max())


def upper_density_estimate(s: TimeSet) -> float:
    """``max |S n [0, n)| / n`` over ``n`` from ``ceil(W/2)`` to ``W``."""
    counts = np.cumsum(_indicator(s))
    lengths = np.arange(1, s.window + 1)
    first = -(-s.window // 2)
    ratios = counts[first - 1 :] / lengths[first - 1 :]
    return float(ratios.max())


def banach_density_estimate(s: TimeSet, min_len: int) -> float:
    """Max of ``|S n I| / |I|`` over intervals ``I`` in the window whose length is a multiple of ``min_len``."""
    if not 1 <= min_len <= s.window:
        raise ValueError(f"min_len must lie in 1..{s.window}, got {min_len}")
    prefix = np.concatenate(([0], np.cumsum(_indicator(s))))
    best = 0.0
    for length in range(min_len, s.window + 1, min_len):
        counts = prefix[length:] - prefix[:-length]
        best = max(best, float(counts.max()) / length)
    return best


def fs_generate(generators: Sequence[int]) -> TimeSet:
    """All sums over nonempty subsets of ``generators``, windowed to their maximum."""
    values = [int(g) for g in generators]
    if not values:
        raise ValueError("fs_generate needs at least one generator")
    if len(values) > MAX_GENERATORS:
        raise CapExceededError("FS generators", len(values), MAX_GENERATORS)
    if any(g < 1 for g in values):
        raise ValueError(f"generators must be positive integers, got {values}")
    if sum(values) >= MAX_FS_SUM:
        raise WindowOverflowError(f"finite sums of {values} overflow the integer window")
    sums = np.zeros(1, dtype=np.int64)
    for g in values:
        sums = np.concatenate((sums, sums + g))
    members = np.unique(sums[1:])
    return TimeSet(window=int(members[-1]) + 1, members=tuple(int(n) for n in members))


def ip_star_window_check(s: TimeSet, samples: Sequence[Sequence[int]]) -> List[IPSampleResult]:
    """Whether ``s`` meets each sampled finite-sum set; evidence, not a proof of IP*-ness."""
    results: List[IPSampleResult] = []
    for generators in samples:
        fs = fs_generate(generators)
        if fs.window > s.window:
            raise WindowOverflowError(
                f"FS{list(generators)} reaches {fs.window - 1}, outside the window [0, {s.window})"
            )
        common = s.intersection(fs).members
        results.append(
            IPSampleResult(generators=[int(g) for g in generators], intersects=bool(common), witness=common[0] if common else None)
        )
    LOGGER.debug("IP* window check", extra={"samples": len(results), "misses": sum(not r.intersects for r in results)})
    return results


__all__ = [
    "syndetic_gap",
    "max_run",
    "upper_density_estimate",
    "banach_density_estimate",
    "fs_generate",
    "ip_star_window_check",
    "MAX_GENERATORS",
]
