"""Periodic-measure probes at finite resolution.

Almost-dense probes enumerate candidates in (period, order) and return the
first one whose mass outside the target set is below epsilon. A convex
combination of periodic measures never beats its best component there, so
single candidates suffice. Finding nothing means "none at this resolution".
The density probe optimises over convex combinations of cylinder conditionals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from src.common.config import load_config
from src.common.errors import EmptySetError, HostMismatchError, InvalidWordError
from src.common.log import get_logger
from src.classify.models import DensityCurve, ProbeCandidate, ProbeResult
from src.hyperspace.subsets import FiniteSubset
from src.measures.dynamics import cylinder_conditional, dirac, haar, mass, uniform
from src.measures.metrics import TestFunction, family_terms, series_metric
from src.measures.models import AtomicMeasure
from src.systems.dynamics import cycle_decomposition, truncate
from src.systems.models import CylinderSystem, FiniteSystem, Word

LOGGER = get_logger(__name__)

# Series terms this far below the leading weight sit under the solver tolerance.
SERIES_TERM_FLOOR = 1e-15


def _finite_candidates(system: FiniteSystem) -> List[ProbeCandidate]:
    candidates: List[ProbeCandidate] = []
    for cycle in cycle_decomposition(system):
        candidates.append(
            ProbeCandidate(
                kind="cycle-uniform",
                description=f"uniform on cycle through {system.label(cycle[0])}",
                period=1,
                outside_mass=Fraction(0),
                measure=uniform(system, cycle),
            )
        )
        for point in cycle:
            candidates.append(
                ProbeCandidate(
                    kind="periodic-dirac",
                    description=f"dirac at {system.label(point)}",
                    period=len(cycle),
                    outside_mass=Fraction(0),
                    measure=dirac(system, point),
                )
            )
    candidates.sort(key=lambda candidate: (candidate.period, candidate.kind != "cycle-uniform", candidate.measure.support))
    return candidates


def _probe_finite(system: FiniteSystem, members: frozenset, epsilon: float) -> ProbeResult:
    examined = 0
    for candidate in _finite_candidates(system):
        examined += 1
        candidate.outside_mass = 1 - mass(candidate.measure, members)
        if candidate.outside_mass < epsilon:
            return ProbeResult(found=True, epsilon=epsilon, candidates_examined=examined, witness=candidate)
    return ProbeResult(found=False, epsilon=epsilon, candidates_examined=examined)


def _cylinder_outside_mass(target: Word, word: Word) -> Fraction:
    """``mu_[word]`` mass outside ``[target]``."""
    shared = min(len(target), len(word))
    if target[:shared] != word[:shared]:
        return Fraction(1)
    if len(word) >= len(target):
        return Fraction(0)
    return 1 - Fraction(1, 2 ** (len(target) - len(word)))


def _probe_odometer(cyl: CylinderSystem, target: Word, epsilon: float, depth_cap: int) -> ProbeResult:
    examined = 0
    for length in range(depth_cap + 1):
        for word in cyl.words(length):
            examined += 1
            outside = _cylinder_outside_mass(target, word)
            if outside < epsilon:
                depth = max(length, len(target), 1)
                measure = cylinder_conditional(cyl, word, depth) if word else haar(cyl, depth)
                witness = ProbeCandidate(
                    kind="cylinder-conditional",
                    description=f"conditional on [{''.join(map(str, word))}]",
                    period=2**length,
                    outside_mass=outside,
                    measure=measure,
                )
                return ProbeResult(found=True, epsilon=epsilon, candidates_examined=examined, witness=witness)
    return ProbeResult(found=False, epsilon=epsilon, candidates_examined=examined)


def almost_dense_periodic_probe(
    system: FiniteSystem | CylinderSystem,
    u: FiniteSubset | Iterable[int] | Sequence[int],
    epsilon: float,
    *,
    depth_cap: Optional[int] = None,
) -> ProbeResult:
    """Search for a periodic measure ``mu`` with ``mu(u^c) < epsilon``.

    For finite systems ``u`` is a set of points; for cylinder systems it is a
    cylinder word. Odometer candidates are the cylinder conditionals up to
    ``depth_cap``; the full shift is probed on its truncation at ``|u|``.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if isinstance(system, CylinderSystem):
        target = system.validate_word(u)
        if system.kind == "odometer":
            result = _probe_odometer(system, target, epsilon, depth_cap if depth_cap is not None else load_config().depth_cap)
        else:
            host = truncate(system, len(target))
            result = _probe_finite(host, frozenset(system.cylinder_indices(len(target), target)), epsilon)
    else:
        members = frozenset(u.elements if isinstance(u, FiniteSubset) else (system.check_index(point) for point in u))
        if not members:
            raise EmptySetError(f"{system.name}: probe target set is empty")
        result = _probe_finite(system, members, epsilon)
    LOGGER.info(
        "Periodic-measure probe finished",
        extra={"system": system.name, "epsilon": epsilon, "found": result.found, "examined": result.candidates_examined},
    )
    return result


def cylinder_projection(cyl: CylinderSystem, target: AtomicMeasure, depth: int, host_depth: int) -> AtomicMeasure:
    """``sum_C target(C) mu_C`` over the cylinders ``C`` of length ``depth``."""
    modulus = 2**depth
    spread = 2 ** (host_depth - depth)
    cylinder_mass = [Fraction(0)] * modulus
    for index, weight in target.atoms:
        cylinder_mass[index % modulus] += weight
    weights = {
        index: cylinder_mass[index % modulus] / spread
        for index in range(2**host_depth)
        if cylinder_mass[index % modulus]
    }
    return AtomicMeasure.on(target.host, target.size, weights)


def _cylinder_columns(depth: int, host_depth: int) -> np.ndarray:
    """Column ``r`` is the conditional measure on the depth-``depth`` cylinder whose word value is ``r``."""
    size, modulus = 2**host_depth, 2**depth
    columns = np.zeros((size, modulus))
    columns[np.arange(size), np.arange(size) % modulus] = 1.0 / 2 ** (host_depth - depth)
    return columns


def _best_mixture(
    host: FiniteSystem, target: AtomicMeasure, depth: int, host_depth: int, values: np.ndarray, weights: np.ndarray
) -> AtomicMeasure:
    """Convex combination of depth-``depth`` cylinder conditionals closest to ``target`` in the series metric.

    Solved as the linear program ``min sum_n w_n t_n`` subject to
    ``|<f_n, target - sum_C a_C mu_C>| <= t_n``, ``a >= 0`` and ``sum_C a_C = 1``.
    """
    columns = _cylinder_columns(depth, host_depth)
    kept = weights >= weights.max() * SERIES_TERM_FLOOR
    response = values[kept] @ columns
    goal = values[kept] @ target.to_vector()
    rows, count = response.shape
    slack = sparse.identity(rows, format="csr")
    bound_rows = sparse.bmat([[sparse.csr_matrix(response), -slack], [sparse.csr_matrix(-response), -slack]], format="csr")
    total_row = np.concatenate((np.ones(count), np.zeros(rows)))[None, :]
    result = linprog(
        np.concatenate((np.zeros(count), weights[kept])),
        A_ub=bound_rows,
        b_ub=np.concatenate((goal, -goal)),
        A_eq=total_row,
        b_eq=[1.0],
        bounds=(0, None),
        method="highs",
    )
    if not result.success:
        raise RuntimeError(f"cylinder mixture at depth {depth} on {host.name} failed: {result.message}")
    mixture = np.clip(result.x[:count], 0.0, None)
    masses = columns @ (mixture / mixture.sum())
    return AtomicMeasure.on(host.name, host.size, {index: float(mass) for index, mass in enumerate(masses) if mass > 0})


def dense_periodic_measures_probe(
    cyl: CylinderSystem,
    target: AtomicMeasure,
    depths: Sequence[int],
    family: Optional[Sequence[TestFunction]] = None,
) -> DensityCurve:
    """Best series-metric distance from ``target`` to a convex combination of cylinder conditionals, per depth.

    ``target`` must live on an odometer truncation at least as deep as every
    requested depth. Depth-``d`` conditionals average their two depth-``d+1``
    children, so the exact curve never rises; the reported curve rises only
    by solver tolerance. ``projections`` holds the distance to the plain
    cylinder projection of ``target``, an upper bound for each entry.
    """
    if cyl.kind != "odometer":
        raise InvalidWordError("cylinder density curves are computed on the odometer")
    host_depth = target.size.bit_length() - 1
    host = truncate(cyl, max(host_depth, 1))
    if target.host != host.name or target.size != host.size:
        raise HostMismatchError(f"target lives on {target.host}, not on an odometer truncation")
    for depth in depths:
        if not 0 <= depth <= host_depth:
            raise HostMismatchError(f"depth {depth} is not representable on {host.name}")
    values, weights = family_terms(host, family)
    curve = DensityCurve(target_host=host.name)
    for depth in depths:
        mixture = _best_mixture(host, target, depth, host_depth, values, weights)
        curve.depths.append(depth)
        curve.distances.append(series_metric(host, target, mixture, family))
        curve.projections.append(series_metric(host, target, cylinder_projection(cyl, target, depth, host_depth), family))
    LOGGER.info(
        "Cylinder density curve computed",
        extra={"host": host.name, "depths": len(curve.depths), "final": curve.distances[-1] if curve.distances else None},
    )
    return curve


__all__ = ["almost_dense_periodic_probe", "dense_periodic_measures_probe", "cylinder_projection"]
