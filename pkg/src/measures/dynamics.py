"""Pushforward dynamics T_M, the M_n lattice, barycenters and cylinder measures."""

from __future__ import annotations

from collections import Counter, defaultdict
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from numbers import Real
from typing import Dict, Iterable, List, Optional, Sequence

from src.common.config import load_config
from src.common.errors import CapExceededError, HostMismatchError, InvalidWordError
from src.common.log import get_logger
from src.hyperspace.subsets import FiniteSubset
from src.measures.models import AtomicMeasure, MeasureOnMeasures
from src.systems.dynamics import truncate
from src.systems.models import CylinderSystem, FactorMap, FiniteSystem

LOGGER = get_logger(__name__)


def _check_host(system: FiniteSystem, mu: AtomicMeasure) -> None:
    if (mu.host, mu.size) != (system.name, system.size):
        raise HostMismatchError(f"measure lives on {mu.host}, not {system.name}")


def dirac(system: FiniteSystem, x: int) -> AtomicMeasure:
    return AtomicMeasure.of(system, {system.check_index(x): Fraction(1)})


def uniform(system: FiniteSystem, points: Iterable[int]) -> AtomicMeasure:
    chosen = sorted({system.check_index(point) for point in points})
    if not chosen:
        raise ValueError("uniform measure needs at least one point")
    share = Fraction(1, len(chosen))
    return AtomicMeasure.of(system, {point: share for point in chosen})


def mass(mu: AtomicMeasure, points: FiniteSubset | Iterable[int]) -> Real:
    """``mu(A)``."""
    members = set(points.elements if isinstance(points, FiniteSubset) else points)
    return sum((weight for index, weight in mu.atoms if index in members), Fraction(0))


def pushforward(system: FiniteSystem, mu: AtomicMeasure) -> AtomicMeasure:
    """``(T_M mu)(i) = sum of mu(j) over T(j) = i``."""
    _check_host(system, mu)
    pushed: Dict[int, Real] = defaultdict(Fraction)
    for index, weight in mu.atoms:
        pushed[system.mapping[index]] += weight
    return AtomicMeasure.of(system, pushed)


def pushforward_power(system: FiniteSystem, mu: AtomicMeasure, steps: int) -> AtomicMeasure:
    current = mu
    for _ in range(steps):
        current = pushforward(system, current)
    return current


def measure_period(system: FiniteSystem, mu: AtomicMeasure, bound: int) -> Optional[int]:
    """Least ``p <= bound`` with ``T_M^p mu = mu``, else None."""
    if bound < 1:
        raise ValueError(f"bound must be at least 1, got {bound}")
    _check_host(system, mu)
    current = mu
    for step in range(1, bound + 1):
        current = pushforward(system, current)
        if current == mu:
            return step
    return None


def count_Mn(size: int, n: int) -> int:
    return comb(n + size - 1, size - 1)


def enumerate_Mn_lattice(system: FiniteSystem, n: int, *, cap: int | None = None) -> List[AtomicMeasure]:
    """Every ``(1/n) sum delta_{x_i}`` over multisets of ``n`` points, each once."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    cap = load_config().lattice_cap if cap is None else cap
    total = count_Mn(system.size, n)
    if total > cap:
        LOGGER.warning("M_n enumeration refused", extra={"system": system.name, "n": n, "count": total, "cap": cap})
        raise CapExceededError(f"M_{n}({system.name})", total, cap)
    lattice = [
        AtomicMeasure.of(system, {point: Fraction(count, n) for point, count in Counter(multiset).items()})
        for multiset in combinations_with_replacement(range(system.size), n)
    ]
    LOGGER.info("M_n lattice enumerated", extra={"system": system.name, "n": n, "count": len(lattice)})
    return lattice


def barycenter(nu: MeasureOnMeasures) -> AtomicMeasure:
    """``sum_k w_k theta_k``."""
    first = nu.atoms[0][0]
    averaged: Dict[int, Real] = defaultdict(Fraction)
    for theta, weight in nu.atoms:
        for index, value in theta.atoms:
            averaged[index] += weight * value
    return AtomicMeasure.on(first.host, first.size, averaged)


def push_measure_on_measures(system: FiniteSystem, nu: MeasureOnMeasures) -> MeasureOnMeasures:
    """Image of ``nu`` under the induced map ``theta -> T_M theta``."""
    return MeasureOnMeasures.of((pushforward(system, theta), weight) for theta, weight in nu.atoms)


def factor_pushforward(factor: FactorMap, mu: AtomicMeasure) -> AtomicMeasure:
    """``pi mu`` for a factor map ``pi``."""
    _check_host(factor.source, mu)
    pushed: Dict[int, Real] = defaultdict(Fraction)
    for index, weight in mu.atoms:
        pushed[factor.mapping[index]] += weight
    return AtomicMeasure.of(factor.target, pushed)


def product_measure(mu: AtomicMeasure, nu: AtomicMeasure, product: FiniteSystem) -> AtomicMeasure:
    """``mu x nu`` on a product system built by ``product_system``."""
    if product.size != mu.size * nu.size:
        raise HostMismatchError(f"{product.name} is not the product of {mu.host} and {nu.host}")
    weights = {i * nu.size + j: left * right for i, left in mu.atoms for j, right in nu.atoms}
    return AtomicMeasure.of(product, weights)


def cylinder_conditional(cyl: CylinderSystem, word: Sequence[int], depth: int) -> AtomicMeasure:
    """Uniform (Haar) measure conditioned on ``[word]``, realised on ``truncate(cyl, depth)``."""
    host = truncate(cyl, depth)
    points = cyl.cylinder_indices(depth, word)
    return AtomicMeasure.of(host, {point: Fraction(1, len(points)) for point in points})


def haar(cyl: CylinderSystem, depth: int) -> AtomicMeasure:
    host = truncate(cyl, depth)
    return uniform(host, range(host.size))


def birkhoff_average(cyl: CylinderSystem, word: Sequence[int], start: Sequence[int], steps: int) -> Fraction:
    """``(1/steps) #{n < steps : T^n(start) in [word]}`` for the odometer, exactly.

    Only the first ``len(word)`` coordinates of ``start`` matter, since the
    ``+1`` carry never moves information towards lower coordinates.
    """
    if cyl.kind != "odometer":
        raise InvalidWordError("Birkhoff averages are computed for the odometer only")
    if steps < 1:
        raise ValueError(f"steps must be at least 1, got {steps}")
    target = cyl.validate_word(word)
    length = len(target)
    modulus = 2**length
    goal = cyl.word_value(target)
    start_value = cyl.word_value(cyl.validate_word(start, allow_empty=True)[:length])
    offset = (goal - start_value) % modulus
    hits = 0 if offset >= steps else (steps - 1 - offset) // modulus + 1
    return Fraction(hits, steps)


__all__ = [
    "dirac",
    "uniform",
    "mass",
    "pushforward",
    "pushforward_power",
    "measure_period",
    "count_Mn",
    "enumerate_Mn_lattice",
    "barycenter",
    "push_measure_on_measures",
    "factor_pushforward",
    "product_measure",
    "cylinder_conditional",
    "haar",
    "birkhoff_average",
]
