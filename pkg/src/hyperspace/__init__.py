"""Hyperspace dynamics on finite subsets."""

from .subsets import (
    FiniteSubset,
    VietorisBasisElement,
    count_Kn,
    cylinder_points,
    enumerate_Kn,
    hausdorff_distance,
    hausdorff_matrix,
    induced_map_K,
    period_of_set,
    singleton_embedding,
    vietoris_contains,
)

__all__ = [
    "FiniteSubset",
    "VietorisBasisElement",
    "count_Kn",
    "cylinder_points",
    "enumerate_Kn",
    "hausdorff_distance",
    "hausdorff_matrix",
    "induced_map_K",
    "period_of_set",
    "singleton_embedding",
    "vietoris_contains",
]
