"""Transitivity, periodicity and P/M/E verdicts for finite systems."""

from __future__ import annotations

from typing import FrozenSet, Iterable, Optional

import numpy as np

from src.common.log import get_logger
from src.classify.models import ClassificationReport, TotalTransitivity, Verdict
from src.hyperspace.subsets import FiniteSubset
from src.measures.dynamics import uniform
from src.recurrence.analytics import syndetic_gap
from src.recurrence.models import SyndeticGap
from src.recurrence.returns import return_times_point
from src.systems.dynamics import cycle_decomposition, ensure_tds, global_period
from src.systems.models import FiniteSystem

LOGGER = get_logger(__name__)

# Powers of T examined by classify when no horizon is given.
DEFAULT_POWER_HORIZON = 64


def is_transitive(system: FiniteSystem) -> Verdict:
    """A finite t.d.s. is transitive iff its permutation is a single cycle.

    The witness is a transitive point, or two disjoint invariant sets.
    """
    ensure_tds(system)
    cycles = cycle_decomposition(system)
    if len(cycles) == 1:
        return Verdict(value=True, witness={"transitive_point": 0})
    return Verdict(value=False, witness={"invariant_sets": [list(cycles[0]), list(cycles[1])]})


def _cycle_count(mapping: np.ndarray) -> int:
    seen = np.zeros(mapping.size, dtype=bool)
    count = 0
    for start in range(mapping.size):
        if seen[start]:
            continue
        count += 1
        current = start
        while not seen[current]:
            seen[current] = True
            current = int(mapping[current])
    return count


def is_totally_transitive(system: FiniteSystem, up_to: int) -> TotalTransitivity:
    """Transitivity of ``T^k`` for ``k = 1..up_to``, reporting the first power that splits."""
    if up_to < 1:
        raise ValueError(f"up_to must be at least 1, got {up_to}")
    ensure_tds(system)
    base = np.asarray(system.mapping, dtype=np.int64)
    power = base.copy()
    for k in range(1, up_to + 1):
        if _cycle_count(power) != 1:
            LOGGER.debug("Power splits", extra={"system": system.name, "power": k})
            return TotalTransitivity(value=False, up_to=up_to, first_failing_power=k)
        power = base[power]
    return TotalTransitivity(value=True, up_to=up_to)


def periodic_points(system: FiniteSystem) -> FrozenSet[int]:
    """``P(T)``: points on a cycle."""
    return frozenset(point for cycle in cycle_decomposition(system) for point in cycle)


def minimal_points(system: FiniteSystem) -> FrozenSet[int]:
    """``AP(T)``: points whose orbit closure is a minimal set.

    Orbit closures are finite forward orbits, and the minimal ones are exactly the cycles.
    """
    minimal_sets = [frozenset(cycle) for cycle in cycle_decomposition(system)]
    return frozenset().union(*minimal_sets) if minimal_sets else frozenset()


def syndetic_witness(system: FiniteSystem, x: int, u: FiniteSubset | Iterable[int], window: Optional[int] = None) -> SyndeticGap:
    """In-window syndeticity of ``N(x, u)``; a minimal ``x`` in ``u`` has gaps at most its period."""
    return syndetic_gap(return_times_point(system, x, u, window))


def classify(system: FiniteSystem, *, up_to: Optional[int] = None) -> ClassificationReport:
    """Exact P/M/E classification of a finite t.d.s."""
    ensure_tds(system)
    cycles = cycle_decomposition(system)
    transitive = is_transitive(system)
    total = is_totally_transitive(system, up_to or min(system.size, DEFAULT_POWER_HORIZON))
    periodic_set = periodic_points(system)
    pointwise = len(periodic_set) == system.size
    period = global_period(system) if pointwise else None

    orbit_witness = transitive.witness
    measure_witness = uniform(system, range(system.size)).to_payload() if transitive.value else None
    report = ClassificationReport(
        system=system.name,
        points=system.size,
        cycle_type=sorted(len(cycle) for cycle in cycles),
        transitive=transitive,
        totally_transitive=total,
        pointwise_periodic=Verdict(value=pointwise, witness={"periodic_points": len(periodic_set)}),
        periodic=Verdict(value=period is not None, witness={"period": period}),
        p_system=Verdict(value=transitive.value, witness=orbit_witness),
        m_system=Verdict(value=transitive.value and minimal_points(system) == periodic_set, witness=orbit_witness),
        e_system=Verdict(value=transitive.value, witness={"invariant_measure": measure_witness}),
    )
    LOGGER.info(
        "System classified",
        extra={"system": system.name, "transitive": transitive.value, "period": period, "cycles": len(cycles)},
    )
    return report


__all__ = [
    "is_transitive",
    "is_totally_transitive",
    "periodic_points",
    "minimal_points",
    "syndetic_witness",
    "classify",
]
