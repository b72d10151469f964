"""Joinings and disjointness of finite systems."""

from .joinings import (
    DisjointnessResult,
    Joining,
    ProjectionCheck,
    enumerate_joinings,
    is_disjoint,
    is_joining,
    minimal_joinings,
    orbit_closure,
    projection_inequality_check,
)

__all__ = [
    "DisjointnessResult",
    "Joining",
    "ProjectionCheck",
    "enumerate_joinings",
    "is_disjoint",
    "is_joining",
    "minimal_joinings",
    "orbit_closure",
    "projection_inequality_check",
]
