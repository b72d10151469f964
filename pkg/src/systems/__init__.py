"""Finite and cylinder-symbolic dynamical systems."""

from .catalog import block_cycles, cycle, cycle_factor, make_catalog_system
from .descriptor import SystemDescriptor, resolve, resolve_finite
from .dynamics import (
    cycle_decomposition,
    disjoint_union,
    ensure_tds,
    global_period,
    odometer_add,
    odometer_step,
    orbit,
    point_period,
    product_system,
    truncate,
)
from .loader import load_system
from .models import CylinderSystem, FactorMap, FiniteSystem

__all__ = [
    "CylinderSystem",
    "FactorMap",
    "FiniteSystem",
    "SystemDescriptor",
    "block_cycles",
    "cycle",
    "cycle_decomposition",
    "cycle_factor",
    "disjoint_union",
    "ensure_tds",
    "global_period",
    "load_system",
    "make_catalog_system",
    "odometer_add",
    "odometer_step",
    "orbit",
    "point_period",
    "product_system",
    "resolve",
    "resolve_finite",
    "truncate",
]
