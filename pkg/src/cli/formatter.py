"""Report formatting helpers."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from src.cli.models import CheckRecord, Report
from src.common.log import get_logger

LOGGER = get_logger(__name__)


def decimal12(value: Any) -> Any:
    """Round floats to 12 significant digits, recursively, so reports are byte-stable."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(f"{float(value):.12g}")
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Mapping):
        return {str(key): decimal12(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [decimal12(item) for item in value]
    if isinstance(value, (set, frozenset)):
        return [decimal12(item) for item in sorted(value)]
    return value


def to_markdown(report: Report) -> str:
    """Render a Markdown summary of a report."""
    lines = [f"# 검증 보고서 ({report.config.subcommand})", ""]
    if not report.records:
        lines.append("기록된 검사가 없습니다.")
        return "\n".join(lines)
    lines.append("| ID | 근거 | 내용 | 판정 |")
    lines.append("| --- | --- | --- | --- |")
    for record in report.records:
        lines.append(f"| {record.id} | {record.paper_anchor} | {record.anchor} | {record.verdict} |")
    lines.append("")
    failed = [record.id for record in report.records if record.verdict == "fail"]
    lines.append(f"실패: {', '.join(failed)}" if failed else "모든 검사를 통과했습니다.")
    return "\n".join(lines)


def to_csv_rows(records: Iterable[CheckRecord]) -> List[str]:
    """One row per check record."""
    rows = ["id,paper_anchor,anchor,verdict,elapsed"]
    for record in records:
        elapsed = "" if record.elapsed is None else f"{record.elapsed:.3f}"
        rows.append(",".join([record.id, f"\"{record.paper_anchor}\"", f"\"{record.anchor}\"", record.verdict, elapsed]))
    return rows


def sweep_csv_rows(instances: Sequence[Tuple[Any, Any, Any, bool]]) -> List[str]:
    """``instance id, lhs, rhs, ok`` rows for randomized sweeps."""
    rows = ["instance,lhs,rhs,ok"]
    for instance, lhs, rhs, ok in instances:
        rows.append(f"{instance},{decimal12(lhs)},{decimal12(rhs)},{str(bool(ok)).lower()}")
    return rows


def disjointness_csv_rows(entries: Sequence[Dict[str, Any]]) -> List[str]:
    rows = ["p,q,disjoint,witness_size"]
    for entry in entries:
        rows.append(f"{entry['p']},{entry['q']},{str(entry['disjoint']).lower()},{entry['witness_size']}")
    return rows


def histogram_csv_rows(histogram: Mapping[Any, int]) -> List[str]:
    rows = ["period,count"]
    for period in sorted(histogram, key=lambda key: (key is None, key or 0)):
        rows.append(f"{'none' if period is None else period},{histogram[period]}")
    return rows


__all__ = [
    "decimal12",
    "to_markdown",
    "to_csv_rows",
    "sweep_csv_rows",
    "disjointness_csv_rows",
    "histogram_csv_rows",
]
