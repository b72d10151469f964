"""Pydantic payloads for command-line runs and their reports."""

from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, root_validator, validator

from src.systems.descriptor import SystemDescriptor

REPORT_SCHEMA = 1
Subcommand = Literal["analyze", "induce", "recurrence", "joining", "verify"]
OutputFormat = Literal["json", "csv", "md"]
CheckVerdict = Literal["pass", "fail"]


class RunConfig(BaseModel):
    """Everything a run needs, echoed verbatim into its report."""

    subcommand: Subcommand
    systems: List[SystemDescriptor] = Field(default_factory=list)
    window: int = Field(..., ge=1)
    depth: Optional[int] = Field(None, ge=1)
    n: int = Field(2, ge=1)
    min_len: int = Field(1, ge=1)
    seed: int = Field(..., ge=0)
    out: Optional[str] = None
    format: OutputFormat = "json"
    timings: bool = False
    target: Optional[Literal["hyperspace", "measures"]] = None
    check: Optional[str] = None
    point: Optional[int] = Field(None, ge=0)
    u: List[int] = Field(default_factory=list)
    v: List[int] = Field(default_factory=list)

    @validator("seed")
    def _validate_seed(cls, value: int) -> int:
        if value >= 2**64:
            raise ValueError("seed must fit in 64 bits")
        return value

    @root_validator(skip_on_failure=True)
    def _check_subcommand_fields(cls, values: dict) -> dict:
        subcommand = values["subcommand"]
        systems = values.get("systems") or []
        if subcommand in {"analyze", "induce", "recurrence"} and len(systems) != 1:
            raise ValueError(f"{subcommand} needs exactly one system")
        if subcommand == "joining" and len(systems) != 2:
            raise ValueError("joining needs two systems")
        if subcommand == "induce" and values.get("target") is None:
            raise ValueError("induce needs --hyperspace or --measures")
        if subcommand == "verify" and not values.get("check"):
            raise ValueError("verify needs a check id or 'all'")
        if subcommand == "recurrence" and not values.get("u"):
            raise ValueError("recurrence needs a target set --u")
        return values


class CheckRecord(BaseModel):
    """One verified property: what was checked, against which statement, with which outcome."""

    id: str
    paper_anchor: str
    anchor: str
    verdict: CheckVerdict
    witness: Dict[str, Any] = Field(default_factory=dict)
    elapsed: Optional[float] = None


class Report(BaseModel):
    schema_version: int = Field(REPORT_SCHEMA, alias="schema")
    tool_version: str
    config: RunConfig
    records: List[CheckRecord] = Field(default_factory=list)

    class Config:
        allow_population_by_field_name = True

    @property
    def passed(self) -> bool:
        return all(record.verdict == "pass" for record in self.records)

    def to_json(self) -> str:
        return self.json(by_alias=True, exclude_none=True, indent=2)


__all__ = ["REPORT_SCHEMA", "RunConfig", "CheckRecord", "Report", "CheckVerdict"]
