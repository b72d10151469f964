"""Return-time sets ``N(x, U)`` and ``N(U, V)``, proximality and the weak-mixing criterion."""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.common.config import load_config
from src.common.errors import EmptySetError, InvalidWordError
from src.common.log import get_logger
from src.hyperspace.subsets import FiniteSubset
from src.recurrence.models import Proximality, ResidueTimeSet, TimeSet, WeakMixingResult
from src.systems.models import CylinderSystem, FiniteSystem, Word

LOGGER = get_logger(__name__)


def _indices(system: FiniteSystem, points: FiniteSubset | Iterable[int]) -> np.ndarray:
    chosen = sorted({system.check_index(point) for point in (points.elements if isinstance(points, FiniteSubset) else points)})
    if not chosen:
        raise EmptySetError(f"{system.name}: return-time sets need a nonempty target")
    return np.asarray(chosen, dtype=np.int64)


def _window(window: Optional[int]) -> int:
    window = window if window is not None else load_config().default_window
    if window < 1:
        raise ValueError(f"window must be at least 1, got {window}")
    return window


def return_times_point(
    system: FiniteSystem, x: int, u: FiniteSubset | Iterable[int], window: Optional[int] = None
) -> TimeSet:
    """``{n < W : T^n x in u}``."""
    window = _window(window)
    targets = set(_indices(system, u).tolist())
    current = system.check_index(x)
    members: List[int] = []
    for n in range(window):
        if current in targets:
            members.append(n)
        current = system.mapping[current]
    return TimeSet(window=window, members=tuple(members))


def return_times_set(
    system: FiniteSystem | CylinderSystem,
    u: FiniteSubset | Iterable[int] | Sequence[int],
    v: FiniteSubset | Iterable[int] | Sequence[int],
    window: Optional[int] = None,
) -> TimeSet | ResidueTimeSet:
    """``N(U, V) = {n : T^-n V n U != empty}``.

    Finite systems give a windowed TimeSet; cylinder systems take cylinder words
    for ``u`` and ``v`` and give the exact ResidueTimeSet.
    """
    if isinstance(system, CylinderSystem):
        return cylinder_return_times(system, u, v)
    window = _window(window)
    mapping = np.asarray(system.mapping, dtype=np.int64)
    in_v = np.zeros(system.size, dtype=bool)
    in_v[_indices(system, v)] = True
    current = np.zeros(system.size, dtype=bool)
    current[_indices(system, u)] = True
    members: List[int] = []
    for n in range(window):
        if np.any(current & in_v):
            members.append(n)
        moved = np.zeros(system.size, dtype=bool)
        moved[mapping[current]] = True
        current = moved
    return TimeSet(window=window, members=tuple(members))


def cylinder_return_times(cyl: CylinderSystem, u: Sequence[int], v: Sequence[int]) -> ResidueTimeSet:
    """Exact ``N([u], [v])`` for the full shift or the odometer."""
    left, right = cyl.validate_word(u), cyl.validate_word(v)
    if cyl.kind == "odometer":
        length = min(len(left), len(right))
        modulus = 2**length
        residue = (cyl.word_value(right[:length]) - cyl.word_value(left[:length])) % modulus
        return ResidueTimeSet(modulus=modulus, residues=frozenset({residue}))
    # Full shift: a point of [u] reaches [v] at time n iff the words agree where they overlap.
    blocked = frozenset(n for n in range(len(left)) if not _overlap_compatible(left, right, n))
    return ResidueTimeSet(modulus=1, residues=frozenset({0}), prefix_exceptions=blocked)


def _overlap_compatible(left: Word, right: Word, shift: int) -> bool:
    return all(left[shift + i] == right[i] for i in range(min(len(right), len(left) - shift)))


def odometer_point_return_times(cyl: CylinderSystem, x: Sequence[int], u: Sequence[int]) -> ResidueTimeSet:
    """Exact ``N(x, [u])`` for the odometer from the first ``|u|`` coordinates of ``x``."""
    if cyl.kind != "odometer":
        raise InvalidWordError("exact point return times are computed for the odometer only")
    target, start = cyl.validate_word(u), cyl.validate_word(x)
    if len(start) < len(target):
        raise InvalidWordError(f"point prefix of length {len(start)} is shorter than the cylinder word {len(target)}")
    modulus = 2 ** len(target)
    residue = (cyl.word_value(target) - cyl.word_value(start[: len(target)])) % modulus
    return ResidueTimeSet(modulus=modulus, residues=frozenset({residue}))


def is_thick_exact(cyl: CylinderSystem, u: Sequence[int], v: Sequence[int]) -> bool:
    """Whether ``N([u], [v])`` contains arbitrarily long runs."""
    return cylinder_return_times(cyl, u, v).is_thick()


def pair_proximality(system: FiniteSystem, x: int, y: int, window: Optional[int] = None) -> Proximality:
    """``min_{n < W} rho(T^n x, T^n y)``; proximal in-window iff the minimum is 0."""
    window = _window(window)
    left, right = system.check_index(x), system.check_index(y)
    best = np.inf
    first_hit: Optional[int] = None
    for n in range(window):
        distance = 0.0 if left == right else system.metric.distance(left, right)
        if distance < best:
            best = distance
        if distance == 0.0:
            first_hit = n
            break
        left, right = system.mapping[left], system.mapping[right]
    return Proximality(min_dist=float(best), proximal=first_hit is not None, first_hit=first_hit)


def _cylinder_words(cyl: CylinderSystem, max_len: int) -> List[Word]:
    return [word for length in range(1, max_len + 1) for word in cyl.words(length)]


def weak_mixing_criterion(cyl: CylinderSystem, max_len: int) -> WeakMixingResult:
    """Check ``N(U, U) n N(U, V) != empty`` for every ordered pair of cylinders of length <= ``max_len``.

    Stops at the first pair with an empty intersection.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be at least 1, got {max_len}")
    words = _cylinder_words(cyl, max_len)
    witnesses: List[Tuple[Word, Word, int]] = []
    checked = 0
    for u in words:
        returns_u = cylinder_return_times(cyl, u, u)
        for v in words:
            checked += 1
            witness = returns_u.intersection(cylinder_return_times(cyl, u, v)).first_member()
            if witness is None:
                LOGGER.info(
                    "Weak-mixing criterion fails",
                    extra={"system": cyl.name, "max_len": max_len, "u": "".join(map(str, u)), "v": "".join(map(str, v))},
                )
                return WeakMixingResult(passed=False, pairs_checked=checked, witnesses=witnesses, counterexample=(u, v))
            witnesses.append((u, v, witness))
    LOGGER.info("Weak-mixing criterion holds", extra={"system": cyl.name, "max_len": max_len, "pairs": checked})
    return WeakMixingResult(passed=True, pairs_checked=checked, witnesses=witnesses)


__all__ = [
    "return_times_point",
    "return_times_set",
    "cylinder_return_times",
    "odometer_point_return_times",
    "is_thick_exact",
    "pair_proximality",
    "weak_mixing_criterion",
]
