"""Hyperspace: Hausdorff distance, induced map, periods and enumeration."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.common.errors import CapExceededError, EmptySetError, HostMismatchError
from src.hyperspace import (
    FiniteSubset,
    VietorisBasisElement,
    count_Kn,
    cylinder_points,
    enumerate_Kn,
    hausdorff_distance,
    induced_map_K,
    period_of_set,
    singleton_embedding,
    vietoris_contains,
)
from src.systems import CylinderSystem, block_cycles, cycle, global_period, truncate
from src.systems.catalog import dyadic_points

SEVEN = cycle(7)
subsets_of_seven = st.sets(st.integers(0, 6), min_size=1, max_size=7).map(lambda points: FiniteSubset.of(SEVEN, points))


def test_hausdorff_distance_by_hand() -> None:
    system = cycle(4)
    a = FiniteSubset.of(system, [0])
    b = FiniteSubset.of(system, [1, 2])
    assert hausdorff_distance(system, a, b) == pytest.approx(0.5)
    assert hausdorff_distance(system, b, b) == 0.0


def test_singletons_embed_isometrically() -> None:
    system = block_cycles(2)
    singletons = singleton_embedding(system)
    for x in range(system.size):
        for y in range(system.size):
            assert hausdorff_distance(system, singletons[x], singletons[y]) == pytest.approx(system.distance(x, y))


@settings(max_examples=200, deadline=None)
@given(subsets_of_seven, subsets_of_seven, subsets_of_seven)
def test_hausdorff_metric_axioms(a: FiniteSubset, b: FiniteSubset, c: FiniteSubset) -> None:
    ab = hausdorff_distance(SEVEN, a, b)
    assert ab == pytest.approx(hausdorff_distance(SEVEN, b, a))
    assert (ab == 0) == (a == b)
    assert hausdorff_distance(SEVEN, a, c) <= ab + hausdorff_distance(SEVEN, b, c) + 1e-12


def test_induced_map_moves_every_point() -> None:
    system = cycle(4)
    assert induced_map_K(system, FiniteSubset.of(system, [0, 3])).elements == (0, 1)
    assert period_of_set(system, FiniteSubset.of(system, [0, 3]), 4) == 4


@settings(max_examples=100, deadline=None)
@given(st.sets(st.integers(0, 15), min_size=1, max_size=6))
def test_set_period_divides_global_period(points) -> None:
    system = block_cycles(3)
    subset = FiniteSubset.of(system, points)
    period = period_of_set(system, subset, global_period(system))
    assert period is not None
    assert global_period(system) % period == 0


@pytest.mark.parametrize("depth", [1, 2, 3, 5, 8])
def test_dyadic_set_period_doubles(depth: int) -> None:
    system = block_cycles(depth)
    subset = FiniteSubset.of(system, dyadic_points(depth))
    assert period_of_set(system, subset, 2**depth) == 2**depth
    assert period_of_set(system, subset, 2**depth - 1) is None


def test_period_bound_must_be_positive() -> None:
    system = cycle(3)
    with pytest.raises(ValueError):
        period_of_set(system, FiniteSubset.of(system, [0]), 0)


def test_enumeration_order_and_count() -> None:
    system = cycle(4)
    subsets = enumerate_Kn(system, 2)
    assert len(subsets) == count_Kn(4, 2) == 10
    assert [s.elements for s in subsets[:5]] == [(0,), (1,), (2,), (3,), (0, 1)]
    assert count_Kn(3, 5) == 7


def test_enumeration_cap() -> None:
    with pytest.raises(CapExceededError):
        enumerate_Kn(cycle(30), 3, cap=100)


def test_vietoris_membership() -> None:
    system = cycle(4)
    basis = VietorisBasisElement.of(system, [[0], [1, 2]])
    assert vietoris_contains(FiniteSubset.of(system, [0, 1]), basis)
    assert not vietoris_contains(FiniteSubset.of(system, [0]), basis)
    assert not vietoris_contains(FiniteSubset.of(system, [0, 3]), basis)
    with pytest.raises(EmptySetError):
        VietorisBasisElement.of(system, [[0], []])


def test_cylinder_as_hyperspace_point(odometer: CylinderSystem) -> None:
    cylinder = cylinder_points(odometer, 3, (1,))
    host = truncate(odometer, 3)
    assert cylinder.host == "odometer@3"
    assert cylinder.elements == (1, 3, 5, 7)
    assert period_of_set(host, cylinder, 8) == 2


def test_subset_invariants() -> None:
    with pytest.raises(EmptySetError):
        FiniteSubset(host="cycle(3)", elements=())
    with pytest.raises(ValueError):
        FiniteSubset(host="cycle(3)", elements=(2, 1))
    with pytest.raises(HostMismatchError):
        hausdorff_distance(cycle(3), FiniteSubset.of(cycle(4), [0]), FiniteSubset.of(cycle(4), [1]))
    with pytest.raises(HostMismatchError):
        FiniteSubset.of(cycle(3), [0]).union(FiniteSubset.of(cycle(4), [1]))
