"""Atomic measures, pushforward dynamics, metrics and conditional measures."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.common.errors import CapExceededError, EmptySetError, FamilyError, HostMismatchError, InvalidWordError, ZeroMassError
from src.measures import (
    AtomicMeasure,
    MeasureOnMeasures,
    barycenter,
    birkhoff_average,
    conditional,
    conditional_perturbation_check,
    count_Mn,
    cylinder_conditional,
    decomposition_holds,
    default_family,
    dirac,
    enumerate_Mn_lattice,
    factor_pushforward,
    haar,
    mass,
    measure_period,
    product_measure,
    prohorov_distance,
    push_measure_on_measures,
    pushforward,
    pushforward_conditional_check,
    pushforward_power,
    series_metric,
    uniform,
)
from src.systems import CylinderSystem, block_cycles, cycle, cycle_factor, load_system, product_system, truncate
from src.systems.catalog import dyadic_weights

FIVE = cycle(5)
BLOCKS = block_cycles(3)


def _measure_from_counts(counts) -> AtomicMeasure:
    total = sum(counts)
    return AtomicMeasure.of(FIVE, {i: Fraction(c, total) for i, c in enumerate(counts) if c})


measures_on_five = st.lists(st.integers(0, 6), min_size=5, max_size=5).filter(any).map(_measure_from_counts)


def _mixture(pairs) -> MeasureOnMeasures:
    total = sum(count for _, count in pairs)
    return MeasureOnMeasures.of((theta, Fraction(count, total)) for theta, count in pairs)


measures_on_measures = st.lists(st.tuples(measures_on_five, st.integers(1, 5)), min_size=1, max_size=4).map(_mixture)


def test_measure_canonical_form() -> None:
    mu = AtomicMeasure.of(FIVE, {3: Fraction(1, 2), 0: Fraction(1, 2), 4: 0})
    assert mu.atoms == ((0, Fraction(1, 2)), (3, Fraction(1, 2)))
    assert mu.exact
    assert mu.weight(2) == 0
    assert mu.to_payload() == {"atoms": [[0, "1/2"], [3, "1/2"]]}


def test_measure_validation() -> None:
    with pytest.raises(ValueError, match="not 1"):
        AtomicMeasure.of(FIVE, {0: Fraction(1, 3)})
    with pytest.raises(ZeroMassError):
        AtomicMeasure.of(FIVE, {})
    with pytest.raises(ValueError, match="nonpositive"):
        AtomicMeasure.on("cycle(5)", 5, {0: Fraction(3, 2), 1: Fraction(-1, 2)})
    floaty = AtomicMeasure.of(FIVE, {0: 0.1, 1: 0.2, 2: 0.7})
    assert not floaty.exact


def test_pushforward_moves_atoms() -> None:
    assert pushforward(FIVE, dirac(FIVE, 0)) == dirac(FIVE, 1)
    assert pushforward_power(FIVE, dirac(FIVE, 0), 7) == dirac(FIVE, 2)
    assert measure_period(FIVE, uniform(FIVE, range(5)), 5) == 1
    assert measure_period(FIVE, dirac(FIVE, 0), 5) == 5
    assert measure_period(FIVE, dirac(FIVE, 0), 4) is None


@pytest.mark.parametrize("depth", [1, 2, 4, 7])
def test_dyadic_measure_period(depth: int) -> None:
    system = block_cycles(depth)
    mu = AtomicMeasure.of(system, dyadic_weights(depth))
    assert measure_period(system, mu, 2**depth) == 2**depth


def test_dyadic_weights_by_hand() -> None:
    assert dyadic_weights(2) == {1: Fraction(4, 7), 2: Fraction(2, 7), 4: Fraction(1, 7)}


def test_lattice_enumeration() -> None:
    system = cycle(2)
    lattice = enumerate_Mn_lattice(system, 2)
    assert len(lattice) == count_Mn(2, 2) == 3
    assert lattice[1].atoms == ((0, Fraction(1, 2)), (1, Fraction(1, 2)))
    assert all(measure_period(system, mu, 2) is not None for mu in lattice)
    with pytest.raises(CapExceededError):
        enumerate_Mn_lattice(cycle(20), 5, cap=100)


def test_barycenter_and_induced_pushforward() -> None:
    nu = MeasureOnMeasures.of([(dirac(FIVE, 0), Fraction(1, 2)), (dirac(FIVE, 1), Fraction(1, 2))])
    assert barycenter(nu) == uniform(FIVE, [0, 1])
    pushed = push_measure_on_measures(FIVE, nu)
    assert barycenter(pushed) == uniform(FIVE, [1, 2])
    with pytest.raises(HostMismatchError):
        MeasureOnMeasures.of([(dirac(FIVE, 0), Fraction(1, 2)), (dirac(cycle(3), 0), Fraction(1, 2))])


@settings(max_examples=60, deadline=None)
@given(measures_on_five, measures_on_five, st.integers(0, 10))
def test_induced_pushforward_is_affine(mu: AtomicMeasure, nu: AtomicMeasure, tenths: int) -> None:
    t = Fraction(tenths, 10)
    mixed = barycenter(MeasureOnMeasures.of([(mu, t), (nu, 1 - t)]))
    expected = barycenter(MeasureOnMeasures.of([(pushforward(FIVE, mu), t), (pushforward(FIVE, nu), 1 - t)]))
    assert pushforward(FIVE, mixed) == expected


@settings(max_examples=60, deadline=None)
@given(measures_on_measures, st.integers(1, 6))
def test_barycenter_commutes_with_pushforward(nu: MeasureOnMeasures, steps: int) -> None:
    pushed = nu
    for _ in range(steps):
        pushed = push_measure_on_measures(FIVE, pushed)
    assert barycenter(pushed) == pushforward_power(FIVE, barycenter(nu), steps)


def test_factor_and_product_measures() -> None:
    factor = cycle_factor(4, 2)
    assert factor_pushforward(factor, uniform(factor.source, range(4))) == uniform(factor.target, range(2))
    product = product_system(cycle(2), cycle(2))
    joint = product_measure(dirac(cycle(2), 0), uniform(cycle(2), [0, 1]), product)
    assert joint.atoms == ((0, Fraction(1, 2)), (1, Fraction(1, 2)))


def test_cylinder_measures(odometer: CylinderSystem) -> None:
    mu = cylinder_conditional(odometer, (1,), 3)
    assert mu.support == (1, 3, 5, 7)
    assert measure_period(truncate(odometer, 3), mu, 8) == 2
    assert haar(odometer, 2) == uniform(truncate(odometer, 2), range(4))


def test_birkhoff_average_exact(odometer: CylinderSystem, full_shift: CylinderSystem) -> None:
    assert birkhoff_average(odometer, (1, 0), (0,), 8) == Fraction(1, 4)
    assert birkhoff_average(odometer, (1, 0), (0,), 3) == Fraction(1, 3)
    for word in odometer.words(3):
        assert birkhoff_average(odometer, word, (1, 1, 0, 1), 64) == Fraction(1, 8)
    with pytest.raises(InvalidWordError):
        birkhoff_average(full_shift, (1,), (0,), 4)


def test_prohorov_dirac_pairs(data_dir: Path) -> None:
    two = load_system(data_dir / "two_cycle.json")
    assert prohorov_distance(two, dirac(two, 0), dirac(two, 1)) == pytest.approx(1.0, abs=1e-9)
    system = cycle(4)
    for x in range(4):
        for y in range(4):
            expected = min(system.distance(x, y), 1.0)
            assert prohorov_distance(system, dirac(system, x), dirac(system, y)) == pytest.approx(expected, abs=1e-9)


def test_prohorov_guards() -> None:
    with pytest.raises(CapExceededError):
        prohorov_distance(FIVE, uniform(FIVE, [0, 1]), uniform(FIVE, [2, 3]), cap=3)
    with pytest.raises(HostMismatchError):
        prohorov_distance(cycle(3), dirac(FIVE, 0), dirac(FIVE, 1))


@settings(max_examples=60, deadline=None)
@given(measures_on_five, measures_on_five, measures_on_five)
def test_prohorov_metric_axioms(mu: AtomicMeasure, nu: AtomicMeasure, theta: AtomicMeasure) -> None:
    d_mn = prohorov_distance(FIVE, mu, nu)
    assert 0.0 <= d_mn <= 1.0
    assert d_mn == pytest.approx(prohorov_distance(FIVE, nu, mu), abs=1e-9)
    assert (d_mn == 0.0) == (mu == nu)
    assert prohorov_distance(FIVE, mu, theta) <= d_mn + prohorov_distance(FIVE, nu, theta) + 1e-9


def test_series_metric_by_hand(data_dir: Path) -> None:
    two = load_system(data_dir / "two_cycle.json")
    assert series_metric(two, dirac(two, 0), dirac(two, 1)) == pytest.approx(0.46875)
    assert series_metric(two, dirac(two, 0), dirac(two, 1), default_family(two)) == pytest.approx(0.46875)


@settings(max_examples=100, deadline=None)
@given(measures_on_five, measures_on_five, measures_on_five)
def test_series_metric_axioms(mu: AtomicMeasure, nu: AtomicMeasure, theta: AtomicMeasure) -> None:
    d_mn = series_metric(FIVE, mu, nu)
    assert d_mn == pytest.approx(series_metric(FIVE, nu, mu), abs=1e-12)
    assert (d_mn == 0.0) == (mu == nu)
    assert series_metric(FIVE, mu, theta) <= d_mn + series_metric(FIVE, nu, theta) + 1e-9
    assert d_mn == pytest.approx(series_metric(FIVE, mu, nu, default_family(FIVE)), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 15), st.integers(0, 15))
def test_series_metric_separates_points(x: int, y: int) -> None:
    distance = series_metric(BLOCKS, dirac(BLOCKS, x), dirac(BLOCKS, y))
    assert (distance == 0.0) is (x == y)


@settings(max_examples=40, deadline=None)
@given(measures_on_five, st.integers(0, 4), st.sets(st.integers(0, 4), min_size=1))
def test_mass_of_open_sets_is_lower_semicontinuous(mu: AtomicMeasure, z: int, u) -> None:
    # mu_k = (1 - 1/k) mu + (1/k) delta_z converges to mu.
    target = float(mass(mu, u))
    gap = series_metric(FIVE, dirac(FIVE, z), mu)
    tail = []
    for k in range(1, 65):
        mu_k = barycenter(MeasureOnMeasures.of([(mu, 1 - Fraction(1, k)), (dirac(FIVE, z), Fraction(1, k))]))
        distance = series_metric(FIVE, mu_k, mu)
        assert distance == pytest.approx(gap / k, abs=1e-12)
        # The indicator of x carries weight 2^-(x+2).
        assert float(mass(mu_k, u)) >= target - sum(2.0 ** (x + 2) for x in u) * distance - 1e-12
        if k > 32:
            tail.append(float(mass(mu_k, u)))
    assert min(tail) >= target - 1 / 32


def test_series_metric_family_errors() -> None:
    mu, nu = dirac(FIVE, 0), dirac(FIVE, 1)
    with pytest.raises(FamilyError, match="empty"):
        series_metric(FIVE, mu, nu, [])
    with pytest.raises(FamilyError, match="values for 5 points"):
        series_metric(FIVE, mu, nu, [np.ones(3)])
    with pytest.raises(FamilyError, match="undefined at point 2"):
        series_metric(FIVE, mu, nu, [np.array([0.0, 1.0, np.nan, 0.0, 0.0])])
    with pytest.raises(FamilyError, match="f_2"):
        series_metric(FIVE, mu, nu, [lambda i: 1.0, lambda i: 1 / (i - 3)])


def test_series_metric_with_callable_family() -> None:
    mu, nu = dirac(FIVE, 0), dirac(FIVE, 4)
    # f(i) = i: |0 - 4| / (2 * (4 + 1))
    assert series_metric(FIVE, mu, nu, [lambda i: float(i)]) == pytest.approx(0.4)


def test_conditional_measures() -> None:
    mu = uniform(cycle(4), range(4))
    assert conditional(mu, [0, 1]) == uniform(cycle(4), [0, 1])
    assert mass(mu, [0, 1, 2]) == Fraction(3, 4)
    with pytest.raises(ZeroMassError):
        conditional(dirac(cycle(4), 0), [2, 3])
    with pytest.raises(EmptySetError):
        conditional(mu, [])


@settings(max_examples=100, deadline=None)
@given(measures_on_five, st.lists(st.integers(0, 2), min_size=5, max_size=5))
def test_decomposition_identity_exact(mu: AtomicMeasure, labels) -> None:
    parts = [[i for i in range(5) if labels[i] == group] for group in sorted(set(labels))]
    parts = [part for part in parts if part]
    if mass(mu, [i for part in parts for i in part]) == 0:
        return
    assert decomposition_holds(mu, parts)


def test_decomposition_requires_disjoint_parts() -> None:
    with pytest.raises(ValueError, match="disjoint"):
        decomposition_holds(uniform(FIVE, range(5)), [[0, 1], [1, 2]])


def test_perturbation_bound() -> None:
    system = cycle(10)
    mu = uniform(system, range(10))
    record = conditional_perturbation_check(system, mu, range(9), range(10), 0.2)
    assert record.applicable
    assert record.epsilon_ratio == pytest.approx(1 / 9)
    assert record.bound == pytest.approx(0.4)
    assert record.bound_holds and record.distance <= record.bound

    skipped = conditional_perturbation_check(system, mu, range(9), range(10), 0.1)
    assert not skipped.applicable and skipped.bound_holds
    with pytest.raises(ValueError):
        conditional_perturbation_check(system, mu, range(9), range(10), 0.0)


def test_perturbation_bound_applies_above_one_half() -> None:
    system = cycle(10)
    mu = uniform(system, range(10))
    record = conditional_perturbation_check(system, mu, range(5), range(7), 0.6)
    assert record.epsilon_ratio == pytest.approx(0.4)
    assert record.applicable
    assert record.bound == pytest.approx(1.2)
    assert 0 < record.distance <= record.bound and record.bound_holds


@settings(max_examples=100, deadline=None)
@given(
    measures_on_five,
    st.sets(st.integers(0, 4), min_size=1),
    st.sets(st.integers(0, 4), min_size=1),
    st.floats(min_value=1.0001, max_value=20.0),
)
def test_perturbation_bound_over_all_epsilons(mu: AtomicMeasure, a, b, stretch: float) -> None:
    assume(mass(mu, a) > 0 and mass(mu, b) > 0)
    ratio = float(mass(mu, set(a) ^ set(b)) / mass(mu, a))
    assume(ratio > 0)
    record = conditional_perturbation_check(FIVE, mu, a, b, ratio * stretch)
    assert record.applicable
    assert record.bound_holds


@pytest.mark.parametrize("k", range(1, 7))
def test_pushforward_of_conditional(k: int) -> None:
    factor = cycle_factor(2 * k, k)
    weights = {i: Fraction(i + 1, k * (2 * k + 1)) for i in range(2 * k)}
    mu = AtomicMeasure.of(factor.source, weights)
    for point in range(k):
        assert pushforward_conditional_check(factor, mu, [point])
    assert pushforward_conditional_check(factor, mu, list(range(k)))
