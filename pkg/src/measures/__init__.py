"""Probability-measure dynamics on finite systems."""

from .conditional import (
    PerturbationRecord,
    conditional,
    conditional_perturbation_check,
    decomposition_holds,
    pushforward_conditional_check,
)
from .dynamics import (
    barycenter,
    birkhoff_average,
    count_Mn,
    cylinder_conditional,
    dirac,
    enumerate_Mn_lattice,
    factor_pushforward,
    haar,
    mass,
    measure_period,
    product_measure,
    push_measure_on_measures,
    pushforward,
    pushforward_power,
    uniform,
)
from .metrics import default_family, family_terms, prohorov_distance, series_metric
from .models import AtomicMeasure, MeasureOnMeasures

__all__ = [
    "AtomicMeasure",
    "MeasureOnMeasures",
    "PerturbationRecord",
    "barycenter",
    "birkhoff_average",
    "conditional",
    "conditional_perturbation_check",
    "count_Mn",
    "cylinder_conditional",
    "decomposition_holds",
    "default_family",
    "dirac",
    "enumerate_Mn_lattice",
    "factor_pushforward",
    "family_terms",
    "haar",
    "mass",
    "measure_period",
    "product_measure",
    "prohorov_distance",
    "push_measure_on_measures",
    "pushforward",
    "pushforward_power",
    "series_metric",
    "uniform",
]
