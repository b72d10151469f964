"""Prohorov and series metrics on atomic measures."""

from __future__ import annotations

import math
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.common.config import load_config
from src.common.errors import CapExceededError, FamilyError, HostMismatchError
from src.common.log import get_logger
from src.measures.models import AtomicMeasure
from src.systems.models import FiniteSystem

LOGGER = get_logger(__name__)

BISECTION_TOLERANCE = 1e-10
# Float slack when comparing summed masses in the Prohorov feasibility test.
MASS_SLACK = 1e-12
# 2.0**-n underflows to zero beyond this index, so later terms never contribute.
FAMILY_LIMIT = 1100

TestFunction = Union[Callable[[int], float], Sequence[float], np.ndarray]


def _check_host(system: FiniteSystem, mu: AtomicMeasure, nu: AtomicMeasure) -> None:
    mu.same_host(nu)
    if (mu.host, mu.size) != (system.name, system.size):
        raise HostMismatchError(f"measures live on {mu.host}, not {system.name}")


def prohorov_distance(
    system: FiniteSystem,
    mu: AtomicMeasure,
    nu: AtomicMeasure,
    *,
    cap: int | None = None,
    tolerance: float = BISECTION_TOLERANCE,
) -> float:
    """Prohorov distance by bisection on epsilon.

    Feasibility of ``epsilon`` is checked exhaustively over subsets ``A`` of the
    union of supports, with ``A^eps = {x : rho(x, A) < eps}``; other subsets can
    only weaken the two inequalities. The result is the upper end of the final
    bracket, never below the true value.
    """
    _check_host(system, mu, nu)
    if mu == nu:
        return 0.0
    cap = load_config().support_cap if cap is None else cap
    support = sorted(set(mu.support) | set(nu.support))
    if len(support) > cap:
        raise CapExceededError("Prohorov support", len(support), cap)

    size = len(support)
    distances = system.metric.submatrix(support, support)
    mu_vec = np.array([float(mu.weight(index)) for index in support])
    nu_vec = np.array([float(nu.weight(index)) for index in support])

    # Row ``mask`` holds rho(x, A_mask) for each support point x.
    nearest = np.full((2**size, size), np.inf)
    mu_mass = np.zeros(2**size)
    nu_mass = np.zeros(2**size)
    for bit in range(size):
        low, high = 2**bit, 2 ** (bit + 1)
        nearest[low:high] = np.minimum(nearest[:low], distances[bit])
        mu_mass[low:high] = mu_mass[:low] + mu_vec[bit]
        nu_mass[low:high] = nu_mass[:low] + nu_vec[bit]
    nearest, mu_mass, nu_mass = nearest[1:], mu_mass[1:], nu_mass[1:]

    def feasible(epsilon: float) -> bool:
        inside = nearest < epsilon
        mu_blown = inside @ mu_vec
        nu_blown = inside @ nu_vec
        return bool(np.all(mu_mass <= nu_blown + epsilon + MASS_SLACK) and np.all(nu_mass <= mu_blown + epsilon + MASS_SLACK))

    low, high = 0.0, 1.0
    while high - low > tolerance:
        middle = (low + high) / 2
        if feasible(middle):
            high = middle
        else:
            low = middle
    return high


def default_family(system: FiniteSystem, *, limit: int = FAMILY_LIMIT) -> List[np.ndarray]:
    """Singleton indicators by point index, then ``rho(., p_i)``, truncated at ``limit`` functions."""
    family: List[np.ndarray] = []
    for index in range(min(system.size, limit)):
        indicator = np.zeros(system.size)
        indicator[index] = 1.0
        family.append(indicator)
    everyone = list(range(system.size))
    for index in range(min(system.size, limit - len(family))):
        family.append(system.metric.submatrix(everyone, [index])[:, 0])
    return family


def _evaluate_family(system: FiniteSystem, family: Sequence[TestFunction]) -> List[np.ndarray]:
    if not family:
        raise FamilyError("test-function family is empty")
    evaluated: List[np.ndarray] = []
    for position, function in enumerate(family, start=1):
        if callable(function):
            try:
                values = np.array([float(function(index)) for index in range(system.size)])
            except Exception as exc:  # noqa: BLE001
                raise FamilyError(f"f_{position} is undefined on {system.name}: {exc}") from exc
        else:
            values = np.asarray(function, dtype=float)
        if values.shape != (system.size,):
            raise FamilyError(f"f_{position} has {values.size} values for {system.size} points")
        if not np.all(np.isfinite(values)):
            raise FamilyError(f"f_{position} is undefined at point {int(np.flatnonzero(~np.isfinite(values))[0])}")
        evaluated.append(values)
    return evaluated


def series_metric(
    system: FiniteSystem,
    mu: AtomicMeasure,
    nu: AtomicMeasure,
    family: Optional[Sequence[TestFunction]] = None,
) -> float:
    """``sum_n |int f_n dmu - int f_n dnu| / (2^n (||f_n|| + 1))`` over the family, n from 1."""
    _check_host(system, mu, nu)
    if family is None:
        return _default_series_metric(system, mu, nu)
    values, weights = family_terms(system, family)
    return math.fsum((weights * np.abs(values @ (mu.to_vector() - nu.to_vector()))).tolist())


def family_terms(system: FiniteSystem, family: Optional[Sequence[TestFunction]] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Family values as rows of a matrix, with the series weight ``2^-n / (||f_n|| + 1)`` of each row."""
    rows = _evaluate_family(system, default_family(system) if family is None else family)
    values = np.vstack(rows)
    norms = np.abs(values).max(axis=1)
    weights = np.ldexp(1.0, -np.arange(1, len(rows) + 1)) / (norms + 1.0)
    return values, weights


def _default_series_metric(system: FiniteSystem, mu: AtomicMeasure, nu: AtomicMeasure) -> float:
    # Same terms as series_metric(..., default_family(system)) without materialising the family.
    support = sorted(set(mu.support) | set(nu.support))
    difference = np.array([float(mu.weight(index)) - float(nu.weight(index)) for index in support])
    size = system.size
    indicators = min(size, FAMILY_LIMIT)
    terms = [
        math.ldexp(abs(weight), -(index + 1)) / 2.0
        for index, weight in zip(support, difference)
        if index < indicators
    ]
    count = min(size, FAMILY_LIMIT - indicators)
    if count:
        centres = list(range(count))
        columns = system.metric.submatrix(support, centres)
        norms = system.metric.submatrix(list(range(size)), centres).max(axis=0)
        powers = -(indicators + 1 + np.arange(count))
        terms.extend((np.ldexp(np.abs(difference @ columns), powers) / (norms + 1.0)).tolist())
    return math.fsum(terms)


__all__ = ["prohorov_distance", "series_metric", "default_family", "family_terms", "FAMILY_LIMIT"]
