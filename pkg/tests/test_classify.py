"""Classification verdicts and periodic-measure searches."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from src.classify import (
    ClassificationReport,
    TotalTransitivity,
    Verdict,
    almost_dense_periodic_probe,
    classify,
    cylinder_projection,
    dense_periodic_measures_probe,
    is_totally_transitive,
    is_transitive,
    minimal_points,
    periodic_points,
    syndetic_witness,
)
from src.common.errors import EmptySetError, HostMismatchError, InvalidWordError, SurjectivityError
from src.measures import (
    AtomicMeasure,
    cylinder_conditional,
    dirac,
    factor_pushforward,
    haar,
    mass,
    measure_period,
    product_measure,
    uniform,
)
from src.systems import CylinderSystem, block_cycles, cycle, cycle_factor, load_system, product_system, truncate

ODOMETER = CylinderSystem(kind="odometer")
epsilons = st.sampled_from((0.5, 0.1, 0.01))


def test_single_cycle_is_pme() -> None:
    report = classify(cycle(5))
    assert report.transitive.value
    assert report.p_system.value and report.m_system.value and report.e_system.value
    assert report.periodic.witness == {"period": 5}
    assert report.cycle_type == [5]
    assert report.e_system.witness["invariant_measure"] == uniform(cycle(5), range(5)).to_payload()
    # T^5 is the identity on five points.
    assert report.totally_transitive.first_failing_power == 5


def test_block_cycles_are_pointwise_periodic_but_not_transitive() -> None:
    report = classify(block_cycles(3))
    assert report.points == 16
    assert report.cycle_type == [1, 1, 2, 4, 8]
    assert report.pointwise_periodic.value and report.periodic.value
    assert report.periodic.witness == {"period": 8}
    assert not report.transitive.value
    assert report.transitive.witness == {"invariant_sets": [[0], [1]]}
    assert not (report.p_system.value or report.m_system.value or report.e_system.value)


def test_classify_rejects_non_surjective_maps(data_dir: Path) -> None:
    with pytest.raises(SurjectivityError):
        classify(load_system(data_dir / "not_onto.json"))


def test_transitive_witness_point() -> None:
    assert is_transitive(cycle(3)).witness == {"transitive_point": 0}


@pytest.mark.parametrize(
    "size, up_to, expected, failing",
    [(5, 4, True, None), (5, 5, False, 5), (6, 6, False, 2), (1, 3, True, None), (9, 9, False, 3)],
)
def test_total_transitivity(size: int, up_to: int, expected: bool, failing) -> None:
    verdict = is_totally_transitive(cycle(size), up_to)
    assert verdict.value is expected
    assert verdict.first_failing_power == failing


def test_total_transitivity_needs_a_power() -> None:
    with pytest.raises(ValueError):
        is_totally_transitive(cycle(3), 0)
    assert not is_totally_transitive(block_cycles(1), 3).value


def test_periodic_and_minimal_points_agree() -> None:
    system = block_cycles(2)
    assert periodic_points(system) == frozenset(range(8))
    assert minimal_points(system) == periodic_points(system)


def test_syndetic_witness_gap_is_the_period() -> None:
    gap = syndetic_witness(cycle(4), 0, [0], window=16)
    assert gap.max_gap == 4 and gap.covers_window


def test_report_consistency_is_validated() -> None:
    yes, no = Verdict(value=True), Verdict(value=False)
    base = dict(
        system="s",
        points=2,
        transitive=yes,
        totally_transitive=TotalTransitivity(value=True, up_to=1),
        pointwise_periodic=yes,
        periodic=yes,
    )
    ClassificationReport(**base, p_system=yes, m_system=yes, e_system=yes)
    with pytest.raises(ValidationError, match="P-system"):
        ClassificationReport(**base, p_system=yes, m_system=no, e_system=yes)
    with pytest.raises(ValidationError, match="E-system"):
        ClassificationReport(**base, p_system=no, m_system=yes, e_system=no)
    with pytest.raises(ValidationError):
        TotalTransitivity(value=True, up_to=3, first_failing_power=2)


def test_odometer_search_walks_cylinders_in_order(odometer: CylinderSystem) -> None:
    result = almost_dense_periodic_probe(odometer, (1, 0), 0.5)
    assert result.found and result.candidates_examined == 6
    assert result.witness.period == 4
    assert result.witness.outside_mass == 0
    assert result.to_dict()["witness"]["description"] == "conditional on [10]"

    loose = almost_dense_periodic_probe(odometer, (1, 0), 0.8)
    assert loose.witness.period == 1 and loose.witness.outside_mass == Fraction(3, 4)
    assert loose.witness.measure.host == "odometer@2"


def test_odometer_search_respects_depth_cap(odometer: CylinderSystem) -> None:
    result = almost_dense_periodic_probe(odometer, (1, 0), 0.5, depth_cap=1)
    assert not result.found and result.candidates_examined == 3
    assert result.to_dict()["witness"] is None


def test_finite_search_prefers_short_periods() -> None:
    tight = almost_dense_periodic_probe(cycle(5), [0], 0.5)
    assert tight.witness.kind == "periodic-dirac" and tight.candidates_examined == 2
    loose = almost_dense_periodic_probe(cycle(5), [0], 0.9)
    assert loose.witness.kind == "cycle-uniform" and loose.candidates_examined == 1


def test_full_shift_search_uses_truncation(full_shift: CylinderSystem) -> None:
    result = almost_dense_periodic_probe(full_shift, (1, 1), 0.5)
    assert result.found and result.candidates_examined == 3
    assert result.witness.measure == uniform(truncate(full_shift, 2), [3])


def test_almost_dense_guards(odometer: CylinderSystem) -> None:
    with pytest.raises(ValueError):
        almost_dense_periodic_probe(cycle(3), [0], 0.0)
    with pytest.raises(EmptySetError):
        almost_dense_periodic_probe(cycle(3), [], 0.5)
    with pytest.raises(InvalidWordError):
        almost_dense_periodic_probe(odometer, (2,), 0.5)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 2), min_size=1), epsilons)
def test_factor_images_of_periodic_witnesses(v, epsilon: float) -> None:
    factor = cycle_factor(6, 3)
    u = [index for index in range(6) if factor.mapping[index] in v]
    witness = almost_dense_periodic_probe(factor.source, u, epsilon).witness
    pushed = factor_pushforward(factor, witness.measure)
    assert witness.period % measure_period(factor.target, pushed, witness.period) == 0
    assert 1 - mass(pushed, v) == witness.outside_mass < epsilon


words = st.lists(st.integers(0, 1), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(words, words, epsilons)
def test_product_of_periodic_witnesses(u, v, epsilon: float) -> None:
    first = almost_dense_periodic_probe(ODOMETER, u, epsilon / 2).witness
    second = almost_dense_periodic_probe(ODOMETER, v, epsilon / 2).witness
    left, right = truncate(ODOMETER, len(u)), truncate(ODOMETER, len(v))
    product = product_system(left, right)
    joint = product_measure(first.measure, second.measure, product)
    k = first.period * second.period
    assert k % measure_period(product, joint, k) == 0
    box = [i * right.size + j for i in ODOMETER.cylinder_indices(len(u), u) for j in ODOMETER.cylinder_indices(len(v), v)]
    outside = 1 - mass(joint, box)
    assert outside == 1 - (1 - first.outside_mass) * (1 - second.outside_mass)
    assert outside < epsilon


def test_cylinder_projection_spreads_mass(odometer: CylinderSystem) -> None:
    host = truncate(odometer, 3)
    projected = cylinder_projection(odometer, dirac(host, 5), 1, 3)
    assert projected == uniform(host, [1, 3, 5, 7])


def test_density_curve_reaches_target(odometer: CylinderSystem) -> None:
    target = dirac(truncate(odometer, 3), 5)
    curve = dense_periodic_measures_probe(odometer, target, [0, 1, 2, 3])
    assert curve.target_host == "odometer@3"
    assert curve.depths == [0, 1, 2, 3]
    assert curve.is_nonincreasing() and curve.within_projection()
    assert curve.distances[-1] == pytest.approx(0.0, abs=1e-7)
    assert curve.distances[0] == pytest.approx(curve.projections[0], abs=1e-7)
    assert curve.points()[0] == (0, curve.distances[0])


def test_density_curve_is_flat_on_cylinder_averages(odometer: CylinderSystem) -> None:
    flat = dense_periodic_measures_probe(odometer, haar(odometer, 4), range(5))
    assert flat.distances == pytest.approx([0.0] * 5, abs=1e-7)

    conditioned = dense_periodic_measures_probe(odometer, cylinder_conditional(odometer, (1, 0), 4), range(5))
    assert conditioned.distances[2:] == pytest.approx([0.0] * 3, abs=1e-7)
    assert conditioned.distances[0] > 0


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
def test_density_curve_is_nonincreasing_on_lattice_targets(odometer: CylinderSystem, seed: int) -> None:
    host = truncate(odometer, 6)
    rng = np.random.default_rng(seed)
    points = Counter(int(point) for point in rng.integers(0, host.size, size=4))
    target = AtomicMeasure.of(host, {point: Fraction(count, 4) for point, count in points.items()})
    curve = dense_periodic_measures_probe(odometer, target, range(7))
    assert curve.is_nonincreasing()
    assert curve.within_projection()
    assert curve.distances[-1] == pytest.approx(0.0, abs=1e-7)
    assert curve.distances[0] > curve.distances[-1]


def test_density_curve_guards(odometer: CylinderSystem, full_shift: CylinderSystem) -> None:
    target = dirac(truncate(odometer, 2), 1)
    with pytest.raises(InvalidWordError):
        dense_periodic_measures_probe(full_shift, target, [1])
    with pytest.raises(HostMismatchError):
        dense_periodic_measures_probe(odometer, target, [3])
    with pytest.raises(HostMismatchError):
        dense_periodic_measures_probe(odometer, dirac(cycle(4), 1), [1])
