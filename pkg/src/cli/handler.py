"""Command-line entry point for analysis, enumeration and verification runs."""

from __future__ import annotations

import argparse
import sys
import time
from collections import Counter
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from src import get_version
from src.classify.detectors import classify
from src.cli.checks import CHECKS, run_checks
from src.cli.formatter import decimal12, disjointness_csv_rows, histogram_csv_rows, to_csv_rows, to_markdown
from src.cli.models import CheckRecord, Report, RunConfig
from src.common.config import load_config
from src.common.errors import CapExceededError, DynamicsError, SystemFormatError
from src.common.log import get_logger
from src.common.storage import ReportWriter
from src.hyperspace.subsets import FiniteSubset, enumerate_Kn, period_of_set
from src.joinings.joinings import is_disjoint, minimal_joinings
from src.measures.dynamics import enumerate_Mn_lattice, measure_period, uniform
from src.recurrence.analytics import banach_density_estimate, max_run, syndetic_gap, upper_density_estimate
from src.recurrence.models import ResidueTimeSet, TimeSet
from src.recurrence.returns import return_times_point, return_times_set
from src.systems.descriptor import SystemDescriptor, resolve, resolve_finite
from src.systems.dynamics import cycle_decomposition, ensure_tds, global_period
from src.systems.models import CylinderSystem, FiniteSystem

LOGGER = get_logger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

CsvRows = List[str]


def _file_source(value: str) -> Tuple[str, str]:
    return ("file", value)


def _catalog_source(value: str) -> Tuple[str, str]:
    return ("catalog", value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="python -m src.cli", description="Induced dynamics toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", dest="sources", action="append", type=_file_source, default=[], help="system-description JSON file")
    common.add_argument("--catalog", dest="sources", action="append", type=_catalog_source, help="catalog system name")
    common.add_argument("--param", action="append", type=int, default=[], help="catalog parameter, one per --catalog in order")
    common.add_argument("--window", type=int, default=None, help="time window W")
    common.add_argument("--depth", type=int, default=None, help="truncation depth for cylinder systems")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="output path or s3://bucket/key; stdout when omitted")
    common.add_argument("--format", choices=("json", "csv", "md"), default="json")
    common.add_argument("--timings", action="store_true", help="record elapsed seconds (reports are then not byte-stable)")

    sub.add_parser("analyze", parents=[common], help="classification and recurrence summary")

    induce = sub.add_parser("induce", parents=[common], help="periods over K_n or the M_n lattice")
    target = induce.add_mutually_exclusive_group(required=True)
    target.add_argument("--hyperspace", dest="target", action="store_const", const="hyperspace")
    target.add_argument("--measures", dest="target", action="store_const", const="measures")
    induce.add_argument("--n", type=int, default=2)

    recurrence = sub.add_parser("recurrence", parents=[common], help="return-time set and density analytics")
    recurrence.add_argument("--point", type=int, default=None, help="start point; omit for set-to-set return times")
    recurrence.add_argument("--u", type=int, nargs="+", required=True, help="target set, or cylinder word")
    recurrence.add_argument("--v", type=int, nargs="+", default=[], help="second set or word; defaults to --u")
    recurrence.add_argument("--min-len", dest="min_len", type=int, default=1)

    sub.add_parser("joining", parents=[common], help="joining enumeration and disjointness")

    verify = sub.add_parser("verify", parents=[common], help="run verification checks")
    verify.add_argument("check", help=f"'all', a statement alias such as lemma-2.2, or one of: {', '.join(CHECKS)}")
    return parser


def _descriptors(args: argparse.Namespace) -> List[SystemDescriptor]:
    params = list(args.param)
    descriptors = []
    for source, value in args.sources or []:
        if source == "file":
            descriptors.append(SystemDescriptor(source="file", path=value))
        else:
            param = params.pop(0) if params else 1
            descriptors.append(SystemDescriptor(source="catalog", name=value, param=param, depth=args.depth))
    if params:
        raise SystemFormatError(f"{len(params)} --param value(s) without a matching --catalog")
    return descriptors


def build_config(args: argparse.Namespace) -> RunConfig:
    config = load_config()
    return RunConfig(
        subcommand=args.subcommand,
        systems=_descriptors(args),
        window=args.window if args.window is not None else config.default_window,
        depth=args.depth,
        n=getattr(args, "n", 2),
        min_len=getattr(args, "min_len", 1),
        seed=args.seed if args.seed is not None else config.default_seed,
        out=args.out,
        format=args.format,
        timings=args.timings,
        target=getattr(args, "target", None),
        check=getattr(args, "check", None),
        point=getattr(args, "point", None),
        u=getattr(args, "u", None) or [],
        v=getattr(args, "v", None) or [],
    )


def _record(
    config: RunConfig, check_id: str, paper_anchor: str, anchor: str, ok: bool, witness: Dict[str, Any], started: float
) -> CheckRecord:
    return CheckRecord(
        id=check_id,
        paper_anchor=paper_anchor,
        anchor=anchor,
        verdict="pass" if ok else "fail",
        witness=decimal12(witness),
        elapsed=round(time.perf_counter() - started, 3) if config.timings else None,
    )


def _report(config: RunConfig, records: List[CheckRecord]) -> Report:
    return Report(tool_version=get_version(), config=config, records=records)


def _transversal(system: FiniteSystem) -> FiniteSubset:
    """One point per cycle, the least element of each."""
    return FiniteSubset.of(system, [cycle[0] for cycle in cycle_decomposition(system)])


def run_analyze(config: RunConfig) -> Tuple[Report, CsvRows]:
    system = resolve_finite(config.systems[0])
    started = time.perf_counter()
    report = classify(system)
    records = [_record(config, "classification", "Sections 3-4", "P-, M- and E-system detection", True, report.dict(), started)]

    started = time.perf_counter()
    x = config.point if config.point is not None else 0
    u = config.u or [x]
    times = return_times_point(system, x, u, config.window)
    summary: Dict[str, Any] = {"point": x, "u": u, "window": config.window, "returns": len(times)}
    if len(times):
        summary.update(
            syndetic=syndetic_gap(times).to_dict(),
            max_run=max_run(times),
            upper_density=upper_density_estimate(times),
            banach_density=banach_density_estimate(times, min(config.min_len, config.window)),
        )
    records.append(_record(config, "recurrence-summary", "Section 2.1", "return times of a point to a set", True, summary, started))

    started = time.perf_counter()
    transversal = _transversal(system)
    bound = global_period(system)
    periods = {
        "transversal": transversal.to_list(),
        "hyperspace_period": period_of_set(system, transversal, bound),
        "measure_period": measure_period(system, uniform(system, transversal.elements), bound),
        "global_period": bound,
    }
    anchor = "periods of induced hyperspace and measure maps"
    records.append(_record(config, "induced-periods", "Theorems 3.4 and 4.6", anchor, True, periods, started))
    return _report(config, records), to_csv_rows(records)


def run_induce(config: RunConfig) -> Tuple[Report, CsvRows]:
    system = ensure_tds(resolve_finite(config.systems[0]))
    started = time.perf_counter()
    bound = global_period(system)
    if config.target == "hyperspace":
        elements = enumerate_Kn(system, config.n)
        periods = [period_of_set(system, subset, bound) for subset in elements]
        paper_anchor, anchor = "Section 2.2", "induced map on the hyperspace"
    else:
        elements = enumerate_Mn_lattice(system, config.n)
        periods = [measure_period(system, mu, bound) for mu in elements]
        paper_anchor, anchor = "Section 2.3", "induced pushforward on probability measures"
    histogram = Counter(periods)
    witness = {
        "target": config.target,
        "n": config.n,
        "count": len(elements),
        "histogram": {("none" if period is None else str(period)): histogram[period] for period in sorted(histogram, key=lambda p: (p is None, p or 0))},
        "all_periodic": None not in histogram,
    }
    LOGGER.info("Induced periods computed", extra={"system": system.name, "target": config.target, "n": config.n, "count": len(elements)})
    records = [_record(config, f"induce-{config.target}", paper_anchor, anchor, True, witness, started)]
    return _report(config, records), histogram_csv_rows(histogram)


def run_recurrence(config: RunConfig) -> Tuple[Report, CsvRows]:
    system = resolve(config.systems[0])
    started = time.perf_counter()
    v = config.v or config.u
    exact: Optional[ResidueTimeSet] = None
    if isinstance(system, CylinderSystem):
        exact = return_times_set(system, config.u, v)  # type: ignore[assignment]
        times = exact.to_window(config.window)
    elif config.point is not None:
        times = return_times_point(system, config.point, config.u, config.window)
    else:
        times = return_times_set(system, config.u, v, config.window)  # type: ignore[assignment]

    witness: Dict[str, Any] = {"system": system.name, "u": config.u, "v": v, "point": config.point, "times": times.to_payload()}
    if exact is not None:
        witness.update(exact=exact.to_payload(), syndetic_exact=exact.is_syndetic(), thick_exact=exact.is_thick())
    if len(times):
        witness.update(
            syndetic=syndetic_gap(times).to_dict(),
            max_run=max_run(times),
            upper_density=upper_density_estimate(times),
            banach_density=banach_density_estimate(times, min(config.min_len, config.window)),
        )
    records = [_record(config, "return-times", "Section 2.1", "return-time sets and their densities", True, witness, started)]
    return _report(config, records), _timeset_rows(times)


def _timeset_rows(times: TimeSet) -> CsvRows:
    return times.to_csv().splitlines()


def run_joining(config: RunConfig) -> Tuple[Report, CsvRows]:
    left, right = (resolve_finite(descriptor) for descriptor in config.systems)
    started = time.perf_counter()
    result = is_disjoint(left, right)
    minimal = minimal_joinings(left, right)
    witness = {
        "left": left.name,
        "right": right.name,
        **result.to_dict(),
        "minimal_joinings": [joining.to_payload() for joining in minimal],
    }
    records = [_record(config, "disjointness", "Section 5", "joinings and disjointness", True, witness, started)]
    rows = disjointness_csv_rows([{"p": left.name, "q": right.name, **result.to_dict()}])
    return _report(config, records), rows


def run_verify(config: RunConfig) -> Tuple[Report, CsvRows]:
    records: List[CheckRecord] = []
    tables: List[CsvRows] = []
    started = time.perf_counter()
    for check, ok, witness in run_checks(config.check or "all", config.seed):
        table = witness.pop("csv_rows", None)
        if table is not None:
            tables.append(table)
        records.append(_record(config, check.id, check.paper_anchor, check.anchor, ok, witness, started))
        started = time.perf_counter()
    # A single check with a sweep table exports the table; otherwise one row per record.
    rows = tables[0] if len(records) == 1 and tables else to_csv_rows(records)
    return _report(config, records), rows


RUNNERS: Dict[str, Callable[[RunConfig], Tuple[Report, CsvRows]]] = {
    "analyze": run_analyze,
    "induce": run_induce,
    "recurrence": run_recurrence,
    "joining": run_joining,
    "verify": run_verify,
}


def render(report: Report, rows: CsvRows) -> Tuple[str, str]:
    """Body and content type for the configured output format."""
    if report.config.format == "csv":
        return "\n".join(rows) + "\n", "text/csv"
    if report.config.format == "md":
        return to_markdown(report) + "\n", "text/markdown"
    return report.to_json() + "\n", "application/json"


def execute(config: RunConfig) -> int:
    """Run one configured subcommand, emit its report and return the exit code."""
    LOGGER.info("Run started", extra={"subcommand": config.subcommand, "seed": config.seed, "systems": len(config.systems)})
    report, rows = RUNNERS[config.subcommand](config)
    body, content_type = render(report, rows)

    writer = ReportWriter.from_config(load_config())
    if config.out:
        writer.persist(body=body, target=config.out, content_type=content_type)
    else:
        sys.stdout.write(body)
    writer.persist_default(body=body, name=f"{config.subcommand}-{config.seed}.{config.format}", content_type=content_type)

    LOGGER.info("Run finished", extra={"subcommand": config.subcommand, "records": len(report.records), "passed": report.passed})
    return EXIT_OK if report.passed else EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return execute(build_config(args))
    except CapExceededError as exc:
        LOGGER.error("Resource cap exceeded", extra={"error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (DynamicsError, ValidationError, ValueError, IndexError) as exc:
        LOGGER.error("Run rejected", extra={"error": str(exc).replace("\n", "; ")})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


__all__ = ["build_parser", "build_config", "execute", "main", "render", "RUNNERS"]
