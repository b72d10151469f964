"""Pydantic payloads and result records for system classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, root_validator

from src.measures.models import AtomicMeasure

Qualifier = Literal["exact", "at-resolution"]
# Linear-program tolerance when comparing best distances across depths.
DENSITY_TOLERANCE = 1e-7


class Verdict(BaseModel):
    """A boolean property with its qualifier and witness."""

    value: bool
    qualifier: Qualifier = "exact"
    witness: Optional[Any] = None


class TotalTransitivity(BaseModel):
    value: bool
    up_to: int = Field(..., ge=1)
    first_failing_power: Optional[int] = None
    qualifier: Qualifier = "exact"

    @root_validator(skip_on_failure=True)
    def _check_failure(cls, values: dict) -> dict:
        if values["value"] != (values.get("first_failing_power") is None):
            raise ValueError("first_failing_power is set exactly when the verdict is negative")
        return values


class ClassificationReport(BaseModel):
    """Property flags of a finite t.d.s. with their witnesses."""

    system: str
    points: int = Field(..., ge=1)
    cycle_type: List[int] = Field(default_factory=list)
    transitive: Verdict
    totally_transitive: TotalTransitivity
    pointwise_periodic: Verdict
    periodic: Verdict
    p_system: Verdict
    m_system: Verdict
    e_system: Verdict

    @root_validator(skip_on_failure=True)
    def _check_consistency(cls, values: dict) -> dict:
        if values["p_system"].value and not values["m_system"].value:
            raise ValueError("a P-system is an M-system")
        if values["m_system"].value and not values["e_system"].value:
            raise ValueError("an M-system is an E-system")
        if values["periodic"].value != values["pointwise_periodic"].value:
            raise ValueError("periodic and pointwise periodic agree on a finite t.d.s.")
        return values


@dataclass(slots=True)
class ProbeCandidate:
    """A periodic measure considered by the probes, with its mass outside the target set."""

    kind: str
    description: str
    period: int
    outside_mass: Fraction
    measure: AtomicMeasure


@dataclass(slots=True)
class ProbeResult:
    found: bool
    epsilon: float
    candidates_examined: int
    witness: Optional[ProbeCandidate] = None
    qualifier: Qualifier = "at-resolution"

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "found": self.found,
            "epsilon": self.epsilon,
            "candidates_examined": self.candidates_examined,
            "qualifier": self.qualifier,
            "witness": None,
        }
        if self.witness is not None:
            payload["witness"] = {
                "kind": self.witness.kind,
                "description": self.witness.description,
                "period": self.witness.period,
                "outside_mass": str(self.witness.outside_mass),
                "host": self.witness.measure.host,
                "measure": self.witness.measure.to_payload(),
            }
        return payload


@dataclass(slots=True)
class DensityCurve:
    """Best distances from a target to periodic cylinder-measure averages, one entry per depth."""

    target_host: str
    depths: List[int] = field(default_factory=list)
    distances: List[float] = field(default_factory=list)
    projections: List[float] = field(default_factory=list)

    def points(self) -> List[Tuple[int, float]]:
        return list(zip(self.depths, self.distances))

    def is_nonincreasing(self, tolerance: float = DENSITY_TOLERANCE) -> bool:
        return all(later <= earlier + tolerance for earlier, later in zip(self.distances, self.distances[1:]))

    def within_projection(self, tolerance: float = DENSITY_TOLERANCE) -> bool:
        return all(best <= plain + tolerance for best, plain in zip(self.distances, self.projections))


__all__ = [
    "Qualifier",
    "Verdict",
    "TotalTransitivity",
    "ClassificationReport",
    "ProbeCandidate",
    "ProbeResult",
    "DensityCurve",
    "DENSITY_TOLERANCE",
]
