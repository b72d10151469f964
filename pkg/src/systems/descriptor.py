"""System descriptors: a file, a catalog entry or a product of descriptors."""

from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, root_validator

from src.common.errors import SystemFormatError
from src.systems.catalog import make_catalog_system
from src.systems.dynamics import product_system, truncate
from src.systems.loader import load_system
from src.systems.models import CylinderSystem, FiniteSystem


class SystemDescriptor(BaseModel):
    """Where a system comes from and how it is parameterised."""

    source: Literal["file", "catalog", "product"]
    path: Optional[str] = None
    name: Optional[str] = None
    param: int = Field(1, ge=1)
    depth: Optional[int] = Field(None, ge=1, description="truncation depth for cylinder systems")
    parts: List["SystemDescriptor"] = Field(default_factory=list)

    @root_validator(skip_on_failure=True)
    def _check_source_fields(cls, values: dict) -> dict:
        source = values["source"]
        if source == "file" and not values.get("path"):
            raise ValueError("file descriptors need a path")
        if source == "catalog" and not values.get("name"):
            raise ValueError("catalog descriptors need a name")
        if source == "product" and len(values.get("parts") or []) != 2:
            raise ValueError("product descriptors need exactly two parts")
        return values


SystemDescriptor.update_forward_refs()


def resolve(descriptor: SystemDescriptor) -> FiniteSystem | CylinderSystem:
    """Resolve to a FiniteSystem, or a CylinderSystem when no truncation depth is given."""
    if descriptor.source == "file":
        return load_system(descriptor.path)  # type: ignore[arg-type]
    if descriptor.source == "catalog":
        system = make_catalog_system(descriptor.name, descriptor.param)  # type: ignore[arg-type]
        if isinstance(system, CylinderSystem) and descriptor.depth:
            return truncate(system, descriptor.depth)
        return system
    left, right = (resolve_finite(part) for part in descriptor.parts)
    return product_system(left, right)


def resolve_finite(descriptor: SystemDescriptor) -> FiniteSystem:
    system = resolve(descriptor)
    if isinstance(system, CylinderSystem):
        raise SystemFormatError(f"{system.name}: a truncation depth is required where a finite system is expected")
    return system


__all__ = ["SystemDescriptor", "resolve", "resolve_finite"]
