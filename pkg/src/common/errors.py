"""Domain errors. Every error is a ValueError so callers can catch broadly."""

from __future__ import annotations


class DynamicsError(ValueError):
    """Base class for all toolkit errors."""


class ConfigError(DynamicsError):
    """Invalid environment or command-line configuration."""


class SystemFormatError(DynamicsError):
    """A system-description payload failed to parse or validate."""


class MetricAxiomError(DynamicsError):
    """A distance matrix violates a metric axiom."""


class SurjectivityError(DynamicsError):
    """A map declared as a t.d.s. (or factor map) is not onto."""


class HostMismatchError(DynamicsError):
    """Two values belong to different host systems."""


class InvalidWordError(DynamicsError):
    """A cylinder word is empty, has bad symbols or mismatched length."""


class EmptySetError(DynamicsError):
    """An operation requiring a nonempty set received an empty one."""


class ZeroMassError(DynamicsError):
    """Conditioning on a set of zero measure."""


class FamilyError(DynamicsError):
    """A test-function family is empty or undefined somewhere."""


class NotEquivariantError(DynamicsError):
    """A candidate factor map does not intertwine the two maps."""


class UnknownCatalogError(DynamicsError):
    """Catalog name or parameter is not supported."""


class WindowOverflowError(DynamicsError):
    """A finite-sum set does not fit in the observation window."""


class CapExceededError(DynamicsError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, what: str, count: int, cap: int):
        super().__init__(f"{what}: {count} exceeds cap {cap}")
        self.what = what
        self.count = count
        self.cap = cap


__all__ = [
    "DynamicsError",
    "ConfigError",
    "SystemFormatError",
    "MetricAxiomError",
    "SurjectivityError",
    "HostMismatchError",
    "InvalidWordError",
    "EmptySetError",
    "ZeroMassError",
    "FamilyError",
    "NotEquivariantError",
    "UnknownCatalogError",
    "WindowOverflowError",
    "CapExceededError",
]
