"""Atomic probability measures and measures on measures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Dict, Iterable, List, Mapping, Tuple

import numpy as np

from src.common.errors import HostMismatchError, ZeroMassError
from src.systems.models import FiniteSystem

FLOAT_MASS_TOLERANCE = 1e-12


def _is_exact(value: Real) -> bool:
    return isinstance(value, (int, Fraction))


@dataclass(frozen=True, slots=True)
class AtomicMeasure:
    """Finitely supported probability vector on a host system.

    Atoms are kept sorted by point index with zero masses dropped, so equality
    is equality of measures. Masses are Fractions (exact mode) or floats.
    """

    host: str
    size: int
    atoms: Tuple[Tuple[int, Real], ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ZeroMassError(f"{self.host}: a probability measure needs positive total mass")
        previous = -1
        for index, mass in self.atoms:
            if not previous < index < self.size:
                raise ValueError(f"{self.host}: atoms must be sorted indices in 0..{self.size - 1}")
            if mass <= 0:
                raise ValueError(f"{self.host}: atom {index} has nonpositive mass {mass}")
            previous = index
        total = sum(mass for _, mass in self.atoms)
        if self.exact:
            if total != 1:
                raise ValueError(f"{self.host}: masses sum to {total}, not 1")
        elif abs(float(total) - 1.0) > FLOAT_MASS_TOLERANCE:
            raise ValueError(f"{self.host}: masses sum to {float(total)!r}, not 1 within {FLOAT_MASS_TOLERANCE}")

    @classmethod
    def of(cls, system: FiniteSystem, weights: Mapping[int, Real]) -> "AtomicMeasure":
        return cls.on(system.name, system.size, weights)

    @classmethod
    def on(cls, host: str, size: int, weights: Mapping[int, Real]) -> "AtomicMeasure":
        atoms = tuple(sorted((int(index), mass) for index, mass in weights.items() if mass != 0))
        return cls(host=host, size=size, atoms=atoms)

    @property
    def exact(self) -> bool:
        return all(_is_exact(mass) for _, mass in self.atoms)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(index for index, _ in self.atoms)

    def weight(self, index: int) -> Real:
        for point, mass in self.atoms:
            if point == index:
                return mass
        return Fraction(0)

    def as_dict(self) -> Dict[int, Real]:
        return dict(self.atoms)

    def to_vector(self) -> np.ndarray:
        vector = np.zeros(self.size)
        for index, mass in self.atoms:
            vector[index] = float(mass)
        return vector

    def same_host(self, other: "AtomicMeasure") -> None:
        if (self.host, self.size) != (other.host, other.size):
            raise HostMismatchError(f"measures live on different systems: {self.host} vs {other.host}")

    def to_payload(self) -> Dict[str, List[List[object]]]:
        return {"atoms": [[index, str(mass) if _is_exact(mass) else float(mass)] for index, mass in self.atoms]}


@dataclass(frozen=True, slots=True)
class MeasureOnMeasures:
    """Finitely supported probability measure on M(X)."""

    atoms: Tuple[Tuple[AtomicMeasure, Real], ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise ZeroMassError("a measure on M(X) needs at least one atom")
        hosts = {(theta.host, theta.size) for theta, _ in self.atoms}
        if len(hosts) != 1:
            raise HostMismatchError(f"atoms live on different systems: {sorted(host for host, _ in hosts)}")
        if any(weight < 0 for _, weight in self.atoms):
            raise ValueError("weights on M(X) must be nonnegative")
        total = sum(weight for _, weight in self.atoms)
        if all(_is_exact(weight) for _, weight in self.atoms):
            if total != 1:
                raise ValueError(f"weights on M(X) sum to {total}, not 1")
        elif abs(float(total) - 1.0) > FLOAT_MASS_TOLERANCE:
            raise ValueError(f"weights on M(X) sum to {float(total)!r}, not 1")

    @classmethod
    def of(cls, pairs: Iterable[Tuple[AtomicMeasure, Real]]) -> "MeasureOnMeasures":
        merged: Dict[AtomicMeasure, Real] = {}
        for theta, weight in pairs:
            merged[theta] = merged.get(theta, 0) + weight
        return cls(atoms=tuple((theta, weight) for theta, weight in merged.items() if weight != 0))


__all__ = ["AtomicMeasure", "MeasureOnMeasures", "FLOAT_MASS_TOLERANCE"]
