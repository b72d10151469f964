"""Conditional measures: decomposition, perturbation bound and factor pushforward."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from numbers import Real
from typing import Any, Dict, Iterable, Optional, Sequence

from src.common.errors import EmptySetError, ZeroMassError
from src.common.log import get_logger
from src.hyperspace.subsets import FiniteSubset
from src.measures.dynamics import factor_pushforward, mass
from src.measures.metrics import TestFunction, series_metric
from src.measures.models import AtomicMeasure
from src.systems.models import FactorMap, FiniteSystem

LOGGER = get_logger(__name__)


def _members(points: FiniteSubset | Iterable[int]) -> frozenset:
    members = frozenset(points.elements if isinstance(points, FiniteSubset) else points)
    if not members:
        raise EmptySetError("conditioning set is empty")
    return members


def conditional(mu: AtomicMeasure, a: FiniteSubset | Iterable[int]) -> AtomicMeasure:
    """``mu_A(B) = mu(A n B) / mu(A)``."""
    members = _members(a)
    total = mass(mu, members)
    if total == 0:
        raise ZeroMassError(f"{mu.host}: conditioning set {sorted(members)} has zero mass")
    return AtomicMeasure.on(mu.host, mu.size, {index: weight / total for index, weight in mu.atoms if index in members})


def decomposition_holds(mu: AtomicMeasure, parts: Sequence[FiniteSubset | Iterable[int]]) -> bool:
    """``mu_A == sum_i (mu(A_i)/mu(A)) mu_{A_i}`` for ``A`` the disjoint union of ``parts``.

    Parts of zero mass drop out of the sum. Exact for Fraction masses.
    """
    blocks = [_members(part) for part in parts]
    union: frozenset = frozenset()
    for block in blocks:
        if union & block:
            raise ValueError("decomposition parts must be pairwise disjoint")
        union |= block
    whole = conditional(mu, union)
    total = mass(mu, union)
    combined: Dict[int, Real] = {}
    for block in blocks:
        share = mass(mu, block)
        if share == 0:
            continue
        for index, weight in conditional(mu, block).atoms:
            combined[index] = combined.get(index, Fraction(0)) + share / total * weight
    rebuilt = AtomicMeasure.on(mu.host, mu.size, combined)
    if whole.exact and rebuilt.exact:
        return whole == rebuilt
    return whole.support == rebuilt.support and all(
        abs(float(left) - float(right)) <= 1e-12 for (_, left), (_, right) in zip(whole.atoms, rebuilt.atoms)
    )


@dataclass(slots=True)
class PerturbationRecord:
    """Both sides of ``mu(A^B) < eps mu(A)  =>  d(mu_A, mu_B) <= 2 eps``."""

    distance: float
    epsilon_ratio: float
    epsilon: float
    bound: float
    applicable: bool
    bound_holds: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def conditional_perturbation_check(
    system: FiniteSystem,
    mu: AtomicMeasure,
    a: FiniteSubset | Iterable[int],
    b: FiniteSubset | Iterable[int],
    epsilon: float,
    family: Optional[Sequence[TestFunction]] = None,
) -> PerturbationRecord:
    """Compare ``d(mu_A, mu_B)`` with ``2 eps`` when ``mu(A^B)/mu(A) < eps``.

    When the hypothesis fails the record is returned with ``applicable=False``
    and ``bound_holds=True`` (nothing is asserted).
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    left, right = _members(a), _members(b)
    mu_a, mu_b = conditional(mu, left), conditional(mu, right)
    ratio = float(mass(mu, left ^ right) / mass(mu, left))
    distance = series_metric(system, mu_a, mu_b, family)
    applicable = ratio < epsilon
    bound = 2 * epsilon
    record = PerturbationRecord(
        distance=distance,
        epsilon_ratio=ratio,
        epsilon=epsilon,
        bound=bound,
        applicable=applicable,
        bound_holds=(distance <= bound) if applicable else True,
    )
    if not record.bound_holds:
        LOGGER.warning("Perturbation bound violated", extra={"system": system.name, **record.to_dict()})
    return record


def pushforward_conditional_check(factor: FactorMap, mu: AtomicMeasure, a: FiniteSubset | Iterable[int]) -> bool:
    """``pi(mu_{pi^-1 A}) == (pi mu)_A`` exactly."""
    factor.validate()
    members = _members(a)
    for point in members:
        factor.target.check_index(point)
    image = factor_pushforward(factor, mu)
    left = factor_pushforward(factor, conditional(mu, factor.preimage(sorted(members))))
    right = conditional(image, members)
    return left == right


__all__ = [
    "conditional",
    "decomposition_holds",
    "PerturbationRecord",
    "conditional_perturbation_check",
    "pushforward_conditional_check",
]
