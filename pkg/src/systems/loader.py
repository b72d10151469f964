"""System-description file ingestion."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict

import numpy as np
from pydantic import ValidationError

from src.common.errors import SystemFormatError
from src.common.log import get_logger
from src.systems.models import FiniteSystem, LineMetric, MatrixMetric, SystemFile

LOGGER = get_logger(__name__)


def load_system(path: str | Path, *, require_tds: bool | None = None) -> FiniteSystem:
    """Parse and validate a JSON system description.

    ``require_tds`` overrides the file's ``tds`` flag when given.
    """
    path = Path(path)
    if not path.exists():
        raise SystemFormatError(f"system file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SystemFormatError(f"{path.name}: not valid JSON ({exc.msg} at line {exc.lineno})") from exc
    system = system_from_payload(payload, name=path.stem, require_tds=require_tds)
    LOGGER.info("System loaded", extra={"path": str(path), "points": system.size, "tds": system.tds})
    return system


def system_from_payload(payload: Dict[str, Any], *, name: str, require_tds: bool | None = None) -> FiniteSystem:
    try:
        parsed = SystemFile.parse_obj(payload)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "payload"
        raise SystemFormatError(f"{name}: field {location}: {first['msg']}") from exc

    if parsed.metric.kind == "matrix":
        try:
            data = np.asarray(parsed.metric.data, dtype=float)
        except (TypeError, ValueError) as exc:
            raise SystemFormatError(f"{name}: field metric.data: entries must be numbers") from exc
        metric = MatrixMetric(data=data)
    else:
        try:
            coords = np.asarray(parsed.metric.data, dtype=float)
        except (TypeError, ValueError) as exc:
            raise SystemFormatError(f"{name}: field metric.data: coordinates must be numbers") from exc
        metric = LineMetric(coords=coords)
    metric.validate()

    tds = parsed.tds if require_tds is None else require_tds
    return FiniteSystem(
        name=name,
        mapping=tuple(parsed.map),
        metric=metric,
        labels=tuple(parsed.labels) if parsed.labels else (),
        tds=tds,
    )


def system_to_payload(system: FiniteSystem) -> Dict[str, Any]:
    """Inverse of ``system_from_payload`` using the matrix metric form."""
    return {
        "points": system.size,
        "labels": [system.label(index) for index in range(system.size)],
        "metric": {"kind": "matrix", "data": [[float(f"{value:.12g}") for value in row] for row in system.metric.matrix()]},
        "map": list(system.mapping),
        "tds": system.tds,
    }


__all__ = ["load_system", "system_from_payload", "system_to_payload"]
