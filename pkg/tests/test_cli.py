"""Command-line runs: subcommands, output formats and exit codes."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from src.cli import main
from src.cli import checks as checks_module
from src.common import config as config_module


def _run(tmp_path: Path, *argv: str, name: str = "report.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_text(encoding="utf-8") if out.exists() else None


def test_analyze_reports_classification_and_periods(tmp_path: Path) -> None:
    code, body = _run(tmp_path, "analyze", "--catalog", "cycle", "--param", "5")
    assert code == 0
    report = json.loads(body)
    assert report["schema"] == 1
    assert [record["id"] for record in report["records"]] == ["classification", "recurrence-summary", "induced-periods"]
    classification = report["records"][0]["witness"]
    assert classification["p_system"]["value"] is True
    summary = report["records"][1]["witness"]
    assert summary["returns"] == 52 and summary["syndetic"]["max_gap"] == 5
    periods = report["records"][2]["witness"]
    assert periods == {"transversal": [0], "hyperspace_period": 5, "measure_period": 5, "global_period": 5}
    assert report["config"]["seed"] == 20140917
    assert "elapsed" not in report["records"][0]


def test_analyze_csv_lists_records(tmp_path: Path) -> None:
    code, body = _run(tmp_path, "analyze", "--catalog", "example33", "--param", "3", "--format", "csv", name="a.csv")
    assert code == 0
    lines = body.splitlines()
    assert lines[0] == "id,paper_anchor,anchor,verdict,elapsed"
    assert lines[1].startswith("classification,\"Sections 3-4\",") and lines[1].endswith(",pass,")


def test_induce_measures_on_two_cycle(tmp_path: Path, data_dir: Path) -> None:
    fixture = str(data_dir / "two_cycle.json")
    code, body = _run(tmp_path, "induce", "--measures", "--system", fixture, "--n", "2")
    assert code == 0
    witness = json.loads(body)["records"][0]["witness"]
    assert witness["count"] == 3
    assert witness["histogram"] == {"1": 1, "2": 2}
    assert witness["all_periodic"] is True

    code, table = _run(tmp_path, "induce", "--measures", "--system", fixture, "--n", "2", "--format", "csv", name="h.csv")
    assert table == "period,count\n1,1\n2,2\n"


def test_induce_hyperspace_counts_subsets(tmp_path: Path) -> None:
    code, body = _run(tmp_path, "induce", "--hyperspace", "--catalog", "cycle", "--param", "4", "--n", "2")
    assert code == 0
    witness = json.loads(body)["records"][0]["witness"]
    assert witness["count"] == 10
    assert witness["histogram"] == {"2": 2, "4": 8}


def test_recurrence_on_odometer_is_exact(tmp_path: Path) -> None:
    code, body = _run(tmp_path, "recurrence", "--catalog", "odometer", "--u", "1", "--v", "0", "--window", "8")
    assert code == 0
    witness = json.loads(body)["records"][0]["witness"]
    assert witness["exact"] == {"modulus": 2, "residues": [1], "prefix_exceptions": []}
    assert witness["times"]["members"] == [1, 3, 5, 7]
    assert witness["syndetic_exact"] is True and witness["thick_exact"] is False

    code, rows = _run(tmp_path, "recurrence", "--catalog", "odometer", "--u", "1", "--v", "0", "--window", "8", "--format", "csv", name="t.csv")
    assert rows == "1\n3\n5\n7\n"


def test_recurrence_from_a_point(tmp_path: Path) -> None:
    code, body = _run(tmp_path, "recurrence", "--catalog", "cycle", "--param", "4", "--point", "0", "--u", "2", "--window", "8")
    assert code == 0
    witness = json.loads(body)["records"][0]["witness"]
    assert witness["times"] == {"window": 8, "members": [2, 6]}
    assert witness["max_run"] == 1


def test_joining_of_equal_cycles(tmp_path: Path) -> None:
    code, body = _run(tmp_path, "joining", "--catalog", "cycle", "--param", "2", "--catalog", "cycle", "--param", "2")
    assert code == 0
    witness = json.loads(body)["records"][0]["witness"]
    assert witness["disjoint"] is False
    assert witness["minimal_joinings"] == [[0, 3], [1, 2]]
    assert witness["witness_size"] == 2


def test_verify_single_check_is_byte_stable(tmp_path: Path) -> None:
    first = _run(tmp_path, "verify", "weak-mixing-criterion", name="first.json")
    second = _run(tmp_path, "verify", "weak-mixing-criterion", name="second.json")
    assert first[0] == second[0] == 0
    assert first[1] == second[1]
    record = json.loads(first[1])["records"][0]
    assert record["verdict"] == "pass"
    assert record["witness"]["odometer"]["counterexample"] == [[0], [1]]


def test_verify_markdown_summary(tmp_path: Path) -> None:
    code, body = _run(tmp_path, "verify", "weak-mixing-criterion", "--format", "md", name="v.md")
    assert code == 0
    assert body.startswith("# 검증 보고서 (verify)")
    assert "| weak-mixing-criterion | Lemma 4.2 |" in body
    assert "모든 검사를 통과했습니다." in body


def test_verify_disjointness_exports_its_table(tmp_path: Path) -> None:
    code, body = _run(tmp_path, "verify", "disjointness", "--format", "csv", name="d.csv")
    assert code == 0
    lines = body.splitlines()
    assert lines[0] == "p,q,disjoint,witness_size"
    assert len(lines) == 1 + 7 * 7


def test_verify_timings_are_opt_in(tmp_path: Path) -> None:
    code, body = _run(tmp_path, "verify", "weak-mixing-criterion", "--timings")
    assert code == 0
    assert "elapsed" in json.loads(body)["records"][0]


def test_failing_check_exits_one(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    failing = checks_module.Check(
        id="always-fails", paper_anchor="none", anchor="negative control", run=lambda seed: (False, {"seed": seed})
    )
    monkeypatch.setitem(checks_module.CHECKS, "always-fails", failing)
    code, body = _run(tmp_path, "verify", "always-fails", "--seed", "7")
    assert code == 1
    record = json.loads(body)["records"][0]
    assert record["verdict"] == "fail" and record["witness"] == {"seed": 7}


def test_report_goes_to_stdout_without_out(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", "weak-mixing-criterion"]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["records"][0]["id"] == "weak-mixing-criterion"


@pytest.mark.parametrize(
    ("alias", "check_id", "paper_anchor"),
    [
        ("lemma-2.2", "conditional-measures", "Lemma 2.2"),
        ("example-3.3", "pointwise-periodic-hyperspace", "Example 3.3"),
        ("example-4.5", "pointwise-periodic-measures", "Example 4.5"),
    ],
)
def test_verify_accepts_statement_aliases(tmp_path: Path, alias: str, check_id: str, paper_anchor: str) -> None:
    code, body = _run(tmp_path, "verify", alias)
    assert code == 0
    record = json.loads(body)["records"][0]
    assert record["id"] == check_id
    assert record["paper_anchor"] == paper_anchor
    assert record["verdict"] == "pass"


def test_every_check_has_a_statement_alias() -> None:
    for check in checks_module.CHECKS.values():
        assert check.paper_anchor and check.aliases
        for alias in check.aliases:
            assert checks_module.resolve_check_id(alias) == check.id
    assert checks_module.resolve_check_id("odometer") == "odometer"


def test_every_record_carries_a_paper_anchor(tmp_path: Path) -> None:
    code, body = _run(tmp_path, "analyze", "--catalog", "example45-space", "--param", "2")
    assert code == 0
    assert all(record["paper_anchor"] for record in json.loads(body)["records"])


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "no-such-check"],
        ["verify", "lemma-9.9"],
        ["analyze", "--system", "missing.json"],
        ["analyze", "--catalog", "cycle", "--param", "3", "--param", "4"],
        ["analyze", "--catalog", "odometer"],
        ["analyze", "--catalog", "nope"],
        ["joining", "--catalog", "cycle", "--param", "2"],
        ["recurrence", "--catalog", "cycle", "--param", "3", "--point", "9", "--u", "0"],
        ["analyze", "--catalog", "cycle", "--param", "3", "--window", "0"],
    ],
)
def test_usage_errors_exit_two(tmp_path: Path, argv) -> None:
    code, body = _run(tmp_path, *argv)
    assert code == 2
    assert body is None


def test_non_surjective_file_exits_two(tmp_path: Path, data_dir: Path) -> None:
    code, _ = _run(tmp_path, "analyze", "--system", str(data_dir / "not_onto.json"))
    assert code == 2


def test_cap_exceeded_exits_three(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("SUBSET_CAP", "100")
    config_module.load_config(refresh=True)
    code, body = _run(tmp_path, "induce", "--hyperspace", "--catalog", "cycle", "--param", "30", "--n", "3")
    assert code == 3
    assert body is None


def test_missing_subcommand_is_an_argparse_error() -> None:
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2
