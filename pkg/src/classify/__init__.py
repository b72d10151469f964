"""System classification and periodic-measure probes."""

from .detectors import classify, is_totally_transitive, is_transitive, minimal_points, periodic_points, syndetic_witness
from .models import ClassificationReport, DensityCurve, ProbeCandidate, ProbeResult, TotalTransitivity, Verdict
from .probes import almost_dense_periodic_probe, cylinder_projection, dense_periodic_measures_probe

__all__ = [
    "ClassificationReport",
    "DensityCurve",
    "ProbeCandidate",
    "ProbeResult",
    "TotalTransitivity",
    "Verdict",
    "almost_dense_periodic_probe",
    "classify",
    "cylinder_projection",
    "dense_periodic_measures_probe",
    "is_totally_transitive",
    "is_transitive",
    "minimal_points",
    "periodic_points",
    "syndetic_witness",
]
