"""Return-time sets and their combinatorics."""

from .analytics import (
    banach_density_estimate,
    fs_generate,
    ip_star_window_check,
    max_run,
    syndetic_gap,
    upper_density_estimate,
)
from .models import IPSampleResult, Proximality, ResidueTimeSet, SyndeticGap, TimeSet, WeakMixingResult
from .returns import (
    cylinder_return_times,
    is_thick_exact,
    odometer_point_return_times,
    pair_proximality,
    return_times_point,
    return_times_set,
    weak_mixing_criterion,
)

__all__ = [
    "IPSampleResult",
    "Proximality",
    "ResidueTimeSet",
    "SyndeticGap",
    "TimeSet",
    "WeakMixingResult",
    "banach_density_estimate",
    "cylinder_return_times",
    "fs_generate",
    "ip_star_window_check",
    "is_thick_exact",
    "max_run",
    "odometer_point_return_times",
    "pair_proximality",
    "return_times_point",
    "return_times_set",
    "syndetic_gap",
    "upper_density_estimate",
    "weak_mixing_criterion",
]
