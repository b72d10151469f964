"""Registry of verification checks run by ``verify``.

Each check is deterministic given the seed and returns ``(ok, witness)``. A
``csv_rows`` entry in the witness is the check's sweep table; it goes to CSV
exports only, never into the JSON report.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Any, Callable, Dict, Iterator, List, Sequence, Tuple

import numpy as np

from src.classify.detectors import is_transitive
from src.classify.probes import almost_dense_periodic_probe, dense_periodic_measures_probe
from src.cli.formatter import disjointness_csv_rows, sweep_csv_rows
from src.common.errors import DynamicsError
from src.common.log import get_logger
from src.hyperspace.subsets import FiniteSubset, enumerate_Kn, hausdorff_matrix, period_of_set
from src.joinings.joinings import is_disjoint, projection_inequality_check
from src.measures.conditional import conditional_perturbation_check, decomposition_holds, pushforward_conditional_check
from src.measures.dynamics import birkhoff_average, cylinder_conditional, dirac, enumerate_Mn_lattice, mass, measure_period
from src.measures.metrics import prohorov_distance, series_metric
from src.measures.models import AtomicMeasure
from src.recurrence.returns import weak_mixing_criterion
from src.systems.catalog import block_cycles, cycle, cycle_factor, dyadic_points, dyadic_weights
from src.systems.dynamics import cycle_decomposition, disjoint_union, global_period, odometer_add, product_system, truncate
from src.systems.models import CylinderSystem, FiniteSystem

LOGGER = get_logger(__name__)

AXIOM_TOLERANCE = 1e-9
ODOMETER = CylinderSystem(kind="odometer")
FULL_SHIFT = CylinderSystem(kind="full-shift", alphabet=2)

Witness = Dict[str, Any]
CheckFn = Callable[[int], Tuple[bool, Witness]]


@dataclass(frozen=True, slots=True)
class Check:
    id: str
    paper_anchor: str
    anchor: str
    run: CheckFn
    aliases: Tuple[str, ...] = ()


CHECKS: Dict[str, Check] = {}
# Statement-style names (``lemma-2.2``, ``example-3.3``) resolve to check ids.
ALIASES: Dict[str, str] = {}


def register(check_id: str, paper_anchor: str, anchor: str, aliases: Sequence[str] = ()) -> Callable[[CheckFn], CheckFn]:
    def decorator(fn: CheckFn) -> CheckFn:
        CHECKS[check_id] = Check(id=check_id, paper_anchor=paper_anchor, anchor=anchor, run=fn, aliases=tuple(aliases))
        for alias in aliases:
            ALIASES[alias] = check_id
        return fn

    return decorator


def resolve_check_id(name: str) -> str:
    """Map a check id or one of its aliases to the check id."""
    if name in CHECKS:
        return name
    if name in ALIASES:
        return ALIASES[name]
    known = sorted([*CHECKS, *ALIASES])
    raise DynamicsError(f"unknown check {name!r}; expected 'all' or one of {', '.join(known)}")


def _random_measure(rng: np.random.Generator, system: FiniteSystem, max_support: int) -> AtomicMeasure:
    count = int(rng.integers(1, min(max_support, system.size) + 1))
    points = rng.choice(system.size, size=count, replace=False)
    raw = [int(value) for value in rng.integers(1, 10, size=count)]
    total = sum(raw)
    return AtomicMeasure.of(system, {int(point): Fraction(weight, total) for point, weight in zip(points, raw)})


def _full_support(rng: np.random.Generator, system: FiniteSystem) -> AtomicMeasure:
    raw = [int(value) for value in rng.integers(1, 10, size=system.size)]
    total = sum(raw)
    return AtomicMeasure.of(system, {point: Fraction(weight, total) for point, weight in enumerate(raw)})


def _random_subset(rng: np.random.Generator, size: int, *, minimum: int = 1, maximum: int | None = None) -> List[int]:
    count = int(rng.integers(minimum, min(size, maximum or size) + 1))
    return sorted(int(point) for point in rng.choice(size, size=count, replace=False))


def _small_catalog() -> List[FiniteSystem]:
    """Finite catalog systems with at most six points."""
    return [cycle(p) for p in range(1, 7)] + [block_cycles(1), truncate(ODOMETER, 2), truncate(FULL_SHIFT, 2)]


DECOMPOSITIONS = 200
PERTURBATIONS = 1000


@register(
    "conditional-measures",
    "Lemma 2.2",
    "conditional measure decomposition, perturbation bound and factor pushforward",
    aliases=("lemma-2.2",),
)
def check_conditional_measures(seed: int) -> Tuple[bool, Witness]:
    rng = np.random.default_rng(seed)
    decompositions = 0
    for _ in range(DECOMPOSITIONS):
        system = cycle(int(rng.integers(2, 9)))
        mu = _full_support(rng, system)
        members = _random_subset(rng, system.size)
        labels = rng.integers(0, len(members), size=len(members)).tolist()
        parts = [[point for point, label in zip(members, labels) if label == group] for group in sorted(set(labels))]
        decompositions += decomposition_holds(mu, parts)

    sweeps = violations = wide = 0
    worst = 0.0
    sweep: List[Tuple[int, float, float, bool]] = []
    while sweeps < PERTURBATIONS:
        system = cycle(int(rng.integers(6, 13)))
        mu = _full_support(rng, system)
        a = _random_subset(rng, system.size, minimum=3)
        b = sorted(set(a) ^ {int(rng.integers(0, system.size))})
        ratio = float(mass(mu, set(a) ^ set(b)) / mass(mu, a))
        epsilon = float(rng.uniform(ratio, ratio + 1.0))
        if epsilon <= ratio:
            continue
        record = conditional_perturbation_check(system, mu, a, b, epsilon)
        sweeps += record.applicable
        wide += epsilon >= 0.5
        sweep.append((sweeps, record.distance, record.bound, record.bound_holds))
        violations += not record.bound_holds
        worst = max(worst, record.distance / record.bound)

    factors = 0
    for k in range(1, 7):
        factor = cycle_factor(2 * k, k)
        mu = _full_support(rng, factor.source)
        factors += all(pushforward_conditional_check(factor, mu, [point]) for point in range(k))

    ok = decompositions == DECOMPOSITIONS and violations == 0 and factors == 6
    return ok, {
        "decompositions_exact": decompositions,
        "perturbation_instances": sweeps,
        "instances_with_epsilon_at_least_half": wide,
        "violations": violations,
        "worst_distance_over_bound": worst,
        "factor_fixtures": factors,
        "csv_rows": sweep_csv_rows(sweep),
    }


def _axiom_violations(matrix: np.ndarray) -> int:
    """Zero diagonal, positivity off it, symmetry and the triangle inequality, each within tolerance."""
    violations = int(np.count_nonzero(np.abs(np.diag(matrix)) > AXIOM_TOLERANCE))
    off_diagonal = ~np.eye(matrix.shape[0], dtype=bool)
    violations += int(np.count_nonzero((matrix <= 0) & off_diagonal))
    violations += int(np.count_nonzero(np.abs(matrix - matrix.T) > AXIOM_TOLERANCE))
    for k in range(matrix.shape[0]):
        violations += int(np.count_nonzero(matrix > matrix[:, k, None] + matrix[None, k, :] + AXIOM_TOLERANCE))
    return violations


@register(
    "metric-axioms",
    "Sections 2.2-2.3",
    "Hausdorff, Prohorov and series metric axioms",
    aliases=("section-2.2", "section-2.3"),
)
def check_metric_axioms(seed: int) -> Tuple[bool, Witness]:
    rng = np.random.default_rng(seed)
    hausdorff_pairs = hausdorff_violations = 0
    for system in _small_catalog():
        subsets = enumerate_Kn(system, 3)
        hausdorff_pairs += len(subsets) ** 2
        hausdorff_violations += _axiom_violations(hausdorff_matrix(system, subsets))

    hosts = [cycle(6), truncate(ODOMETER, 3), block_cycles(2)]
    prohorov_violations = series_violations = 0
    for _ in range(500):
        system = hosts[int(rng.integers(0, len(hosts)))]
        mu, nu, theta = (_random_measure(rng, system, 6) for _ in range(3))
        for metric, bucket in ((prohorov_distance, "prohorov"), (series_metric, "series")):
            d_mn, d_nm = metric(system, mu, nu), metric(system, nu, mu)
            d_mt, d_nt = metric(system, mu, theta), metric(system, nu, theta)
            broken = (
                metric(system, mu, mu) != 0.0
                or abs(d_mn - d_nm) > AXIOM_TOLERANCE
                or (mu != nu and d_mn <= 0.0)
                or d_mt > d_mn + d_nt + AXIOM_TOLERANCE
            )
            if bucket == "prohorov":
                prohorov_violations += broken
            else:
                series_violations += broken

    dirac_pairs = dirac_violations = 0
    for system in _small_catalog() + [block_cycles(2), truncate(ODOMETER, 3)]:
        for x, y in cartesian(range(system.size), repeat=2):
            dirac_pairs += 1
            expected = min(system.distance(x, y), 1.0)
            dirac_violations += abs(prohorov_distance(system, dirac(system, x), dirac(system, y)) - expected) > AXIOM_TOLERANCE

    ok = hausdorff_violations == prohorov_violations == series_violations == dirac_violations == 0
    return ok, {
        "hausdorff_pairs": hausdorff_pairs,
        "hausdorff_violations": hausdorff_violations,
        "measure_pairs": 500,
        "prohorov_violations": prohorov_violations,
        "series_violations": series_violations,
        "dirac_pairs": dirac_pairs,
        "dirac_violations": dirac_violations,
    }


# Cylinders up to this length are checked exhaustively for their measure period; longer ones are sampled.
EXHAUSTIVE_PERIOD_LENGTH = 8
SAMPLED_CYLINDERS = 16


@register(
    "odometer",
    "Theorem 4.11",
    "odometer carry arithmetic, cylinder-measure periods and Birkhoff averages",
    aliases=("theorem-4.11",),
)
def check_odometer(seed: int) -> Tuple[bool, Witness]:
    rng = np.random.default_rng(seed)
    width = 8
    words = [ODOMETER.value_word(value, width) for value in range(2**width)]
    addition_failures = sum(
        ODOMETER.word_value(odometer_add(words[a], words[b])) != (a + b) % 2**width
        for a in range(2**width)
        for b in range(2**width)
    )

    cycle_failures = [
        depth for depth in range(1, 13) if [len(c) for c in cycle_decomposition(truncate(ODOMETER, depth))] != [2**depth]
    ]

    period_failures = []
    checked = 0
    for length in range(1, 11):
        if length <= EXHAUSTIVE_PERIOD_LENGTH:
            chosen = ODOMETER.words(length)
        else:
            chosen = [ODOMETER.value_word(int(value), length) for value in rng.choice(2**length, SAMPLED_CYLINDERS, replace=False)]
        host = truncate(ODOMETER, length)
        for word in chosen:
            checked += 1
            if measure_period(host, cylinder_conditional(ODOMETER, word, length), 2**length) != 2**length:
                period_failures.append("".join(map(str, word)))

    birkhoff_failures = 0
    for k in range(1, 9):
        start = tuple(int(bit) for bit in rng.integers(0, 2, size=k))
        for word in ODOMETER.words(k):
            for j in range(5):
                birkhoff_failures += birkhoff_average(ODOMETER, word, start, 2 ** (k + j)) != Fraction(1, 2**k)

    ok = not addition_failures and not cycle_failures and not period_failures and not birkhoff_failures
    return ok, {
        "addition_pairs": 4**width,
        "addition_failures": addition_failures,
        "cycle_failures": cycle_failures,
        "cylinders_checked": checked,
        "period_failures": period_failures[:10],
        "birkhoff_failures": birkhoff_failures,
    }


@register(
    "weak-mixing-criterion",
    "Lemma 4.2",
    "return-time criterion separating the full shift from the odometer",
    aliases=("lemma-4.2",),
)
def check_weak_mixing(seed: int) -> Tuple[bool, Witness]:
    shift = weak_mixing_criterion(FULL_SHIFT, 5)
    odometer = weak_mixing_criterion(ODOMETER, 1)
    ok = shift.passed and not odometer.passed and odometer.counterexample == ((0,), (1,))
    return ok, {"full_shift": shift.to_dict(), "odometer": odometer.to_dict()}


@register(
    "pointwise-periodic-hyperspace",
    "Example 3.3",
    "block-cycle truncations: K_m has period 2^m",
    aliases=("example-3.3",),
)
def check_hyperspace_periods(seed: int) -> Tuple[bool, Witness]:
    periods = {}
    for depth in range(1, 13):
        system = block_cycles(depth)
        periods[depth] = period_of_set(system, FiniteSubset.of(system, dyadic_points(depth)), 2**depth)
    return all(periods[m] == 2**m for m in periods), {"periods": periods}


@register(
    "pointwise-periodic-measures",
    "Example 4.5",
    "block-cycle truncations: the dyadic measure has period 2^m",
    aliases=("example-4.5",),
)
def check_measure_periods(seed: int) -> Tuple[bool, Witness]:
    periods = {}
    for depth in range(1, 13):
        system = block_cycles(depth)
        periods[depth] = measure_period(system, AtomicMeasure.of(system, dyadic_weights(depth)), 2**depth)
    return all(periods[m] == 2**m for m in periods), {"periods": periods}


def _equivalence_catalog() -> List[FiniteSystem]:
    return (
        [cycle(p) for p in range(1, 7)]
        + [block_cycles(m) for m in range(1, 4)]
        + [truncate(ODOMETER, d) for d in range(1, 4)]
        + [truncate(FULL_SHIFT, d) for d in range(1, 4)]
        + [product_system(cycle(2), cycle(3)), disjoint_union(cycle(2), cycle(3))]
    )


@register(
    "periodicity-equivalence",
    "Theorems 3.4 and 4.6",
    "periodic, hyperspace pointwise periodic and measure pointwise periodic agree",
    aliases=("theorem-3.4", "theorem-4.6"),
)
def check_periodicity_equivalence(seed: int) -> Tuple[bool, Witness]:
    mismatches = []
    for system in _equivalence_catalog():
        period = global_period(system)
        hyperspace = all(period_of_set(system, subset, period) is not None for subset in enumerate_Kn(system, 3))
        measures = all(measure_period(system, mu, period) is not None for mu in enumerate_Mn_lattice(system, 3))
        if not (hyperspace and measures):
            mismatches.append(system.name)
    return not mismatches, {"systems": len(_equivalence_catalog()), "mismatches": mismatches}


@register(
    "disjointness",
    "Section 5",
    "cycles are disjoint iff their periods are coprime",
    aliases=("section-5",),
)
def check_disjointness(seed: int) -> Tuple[bool, Witness]:
    sweep = []
    failures = []
    for p, q in cartesian(range(2, 9), repeat=2):
        result = is_disjoint(cycle(p), cycle(q))
        sweep.append({"p": p, "q": q, **result.to_dict()})
        minimal_factor = is_transitive(cycle(p)).value or is_transitive(cycle(q)).value
        if result.disjoint != (math.gcd(p, q) == 1) or (result.disjoint and not minimal_factor):
            failures.append([p, q])
    return not failures, {"pairs": len(sweep), "failures": failures, "csv_rows": disjointness_csv_rows(sweep)}


PROJECTION_HORIZON = 64
PROJECTION_TRIPLES = 10_000


@register(
    "projection-inequality",
    "Theorem 5.2",
    "orbit distances are dominated by hyperspace distances to a singleton",
    aliases=("theorem-5.2",),
)
def check_projection_inequality(seed: int) -> Tuple[bool, Witness]:
    rng = np.random.default_rng(seed)
    systems = [cycle(7), block_cycles(3), truncate(ODOMETER, 4), truncate(FULL_SHIFT, 4), product_system(cycle(2), cycle(5))]
    triples = violations = 0
    while triples < PROJECTION_TRIPLES:
        system = systems[int(rng.integers(0, len(systems)))]
        a = FiniteSubset.of(system, _random_subset(rng, system.size, maximum=6))
        u = int(rng.integers(0, system.size))
        result = projection_inequality_check(system, a, u, PROJECTION_HORIZON)
        triples += PROJECTION_HORIZON + 1
        violations += not result.holds
    return violations == 0, {"triples": triples, "horizon": PROJECTION_HORIZON, "violations": violations}


@register(
    "almost-dense-periodic",
    "Definition 4.7",
    "odometer cylinders carry periodic measures of almost full mass",
    aliases=("definition-4.7",),
)
def check_almost_dense_periodic(seed: int) -> Tuple[bool, Witness]:
    failures = []
    searches = 0
    for length in range(1, 7):
        for word in ODOMETER.words(length):
            for epsilon in (0.5, 0.1, 0.01):
                searches += 1
                result = almost_dense_periodic_probe(ODOMETER, word, epsilon)
                witness = result.witness
                if (
                    witness is None
                    or witness.outside_mass != 0
                    or witness.period != 2**length
                    or measure_period(truncate(ODOMETER, length), witness.measure, 2**length) != 2**length
                ):
                    failures.append(["".join(map(str, word)), epsilon])
    return not failures, {"searches": searches, "failures": failures[:10]}


DENSITY_TARGETS = 20
DENSITY_DEPTH = 8
# Targets live two levels below the deepest cylinders on the curve.
DENSITY_HOST_DEPTH = 10
DENSITY_LATTICE = 4
DENSITY_FINAL_BOUND = 0.01


@register(
    "cylinder-density",
    "Remark 4.12",
    "periodic cylinder measures approximate lattice measures",
    aliases=("remark-4.12",),
)
def check_cylinder_density(seed: int) -> Tuple[bool, Witness]:
    rng = np.random.default_rng(seed)
    host = truncate(ODOMETER, DENSITY_HOST_DEPTH)
    finals = []
    failures = 0
    for _ in range(DENSITY_TARGETS):
        points = Counter(int(point) for point in rng.integers(0, host.size, size=DENSITY_LATTICE))
        target = AtomicMeasure.of(host, {point: Fraction(count, DENSITY_LATTICE) for point, count in points.items()})
        curve = dense_periodic_measures_probe(ODOMETER, target, range(DENSITY_DEPTH + 1))
        finals.append(curve.distances[-1])
        failures += not (
            curve.is_nonincreasing() and curve.within_projection() and curve.distances[-1] < DENSITY_FINAL_BOUND
        )
    return failures == 0, {
        "targets": DENSITY_TARGETS,
        "depth": DENSITY_DEPTH,
        "host_depth": DENSITY_HOST_DEPTH,
        "worst_final": max(finals),
        "failures": failures,
    }


def run_checks(check_id: str, seed: int) -> Iterator[Tuple[Check, bool, Witness]]:
    """Run one check or ``all`` in id order, yielding each result as it finishes."""
    if check_id == "all":
        selected: Sequence[Check] = sorted(CHECKS.values(), key=lambda check: check.id)
    else:
        selected = [CHECKS[resolve_check_id(check_id)]]
    for check in selected:
        ok, witness = check.run(seed)
        LOGGER.info("Check finished", extra={"check": check.id, "verdict": "pass" if ok else "fail", "seed": seed})
        yield check, ok, witness


__all__ = ["Check", "CHECKS", "ALIASES", "register", "resolve_check_id", "run_checks"]
