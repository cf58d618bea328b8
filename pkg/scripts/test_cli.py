#!/usr/bin/env python3
"""
End-to-end tests of the cayley command line
"""

import json

import pytest

from cli.verify_cli import verify_all
from core.index import RateSpectrum
from core.k3lattice import separating_triple_example
from data.report_store import ReportStore
from main import run
from utils.config import ToolkitConfig
from utils.constants import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK

WRONG_SPECTRUM = {"rates": [{"rate": "-1", "mult": 2}, {"rate": "0", "mult": 6},
                            {"rate": "1", "mult": 22}, {"rate": "-1 + sqrt(5)", "mult": 6}]}


@pytest.fixture
def cli(tmp_path, capsys):
    """Run the CLI with an isolated config and database, returning (exit code, JSON report)"""
    def invoke(*argv):
        code = run(["--config", str(tmp_path / "config.json"), "--db", str(tmp_path / "reports.db"),
                    "--no-timing", "--json", *argv])
        out = capsys.readouterr().out
        return code, json.loads(out) if out.strip() else None
    return invoke


@pytest.fixture
def wrong_spectrum(tmp_path):
    path = tmp_path / "spectrum.json"
    path.write_text(json.dumps(WRONG_SPECTRUM))
    return path


def test_quartic_solve(cli):
    code, report = cli("quartic", "solve", "--summary")
    assert code == EXIT_OK
    assert report["results"]["count"] == 108
    assert "solutions" not in report["results"]
    assert report["passed"]
    assert report["elapsed_ms"] == 0


def test_compact_index(cli):
    code, report = cli("index", "compact", "--sigma", "-16", "--chi", "24", "--self-int", "0")
    assert code == EXIT_OK
    assert report["results"]["index"] == 4
    assert report["inputs"]["sigma"] == -16


def test_wrong_expectation_fails(cli):
    code, report = cli("index", "compact", "--expect", "5")
    assert code == EXIT_CHECK_FAILED
    assert not report["passed"]


def test_crossing(cli):
    code, report = cli("index", "crossing", "--side", "CS", "--from", "1/2", "--to", "-1/2",
                       "--base-index", "10", "--expect", "18")
    assert code == EXIT_OK
    assert report["results"]["crossed"] == [["0", 8]]


def test_critical_target_rate_is_an_input_error(cli):
    code, _ = cli("index", "crossing", "--to", "0")
    assert code == EXIT_INPUT_ERROR


def test_gluing_flags_negative_dimension(cli):
    code, report = cli("index", "gluing", "--ac", "2,2,2")
    assert code == EXIT_OK
    assert report["results"] == {"index": -2, "flag": "negative virtual dimension"}


def test_check_triple_accepts_a_separating_triple(cli, tmp_path):
    U3, triple = separating_triple_example()
    lattice = tmp_path / "u3.json"
    lattice.write_text(json.dumps(U3.to_json()))
    triple_file = tmp_path / "triple.json"
    triple_file.write_text(json.dumps(triple.to_json()))
    code, report = cli("k3", "check-triple", "--lattice", str(lattice), "--triple", str(triple_file))
    assert code == EXIT_OK
    assert report["results"]["hk_domain"]["valid"]
    assert report["results"]["hk_domain"]["roots"] == 0
    assert all(c["pass"] for c in report["checks"])


def test_tcs_count(cli):
    code, report = cli("tcs", "count", "--pieces", "108,108")
    assert code == EXIT_OK
    assert report["results"]["count"] == 216
    assert report["results"]["betti"] == {"b2": 0, "b3": 155}


def test_tcs_base_and_torsion(cli):
    assert cli("tcs", "base", "--matrix", "1,0,3,1")[1]["results"]["invariant_factors"] == [3]
    code, report = cli("tcs", "torsion", "--lambda", "-1")
    assert code == EXIT_OK
    assert report["results"]["threshold"] == pytest.approx(0.6931471805599453)
    assert cli("tcs", "torsion", "--lambda", "0.5")[0] == EXIT_INPUT_ERROR


def test_torsion_checks_the_defining_equation(cli):
    code, report = cli("tcs", "torsion", "--lambda", "-2.5")
    assert code == EXIT_OK
    assert [c["name"] for c in report["checks"]] == ["threshold_defining_equation"]
    check = report["checks"][0]
    assert check["pass"]
    assert check["actual"] == pytest.approx(0.5)
    assert check["expected"] == pytest.approx(1 - check["actual"])


def test_neck_bound(cli):
    code, report = cli("neck", "bound", "--cf", "2", "--t", "0.01", "--nu", "0.5",
                       "--gamma-max", "3", "--gamma", "2")
    assert code == EXIT_OK
    assert report["results"]["bound"] == pytest.approx(0.2)


def test_unknown_subcommand(cli):
    assert cli("frobnicate")[0] == EXIT_INPUT_ERROR


def test_help_exits_cleanly(capsys):
    assert run(["--help"]) == EXIT_OK
    assert "verify-all" in capsys.readouterr().out


def test_malformed_json_input(cli, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli("neck", "iterate", "--problem", str(bad))[0] == EXIT_INPUT_ERROR
    assert cli("index", "spectrum", "--spectrum", str(tmp_path / "missing.json"))[0] == EXIT_INPUT_ERROR


def test_out_writes_the_report(cli, tmp_path):
    target = tmp_path / "report.json"
    code, printed = cli("--out", str(target), "tcs", "match-forms")
    assert code == EXIT_OK
    assert json.loads(target.read_text()) == printed


def test_reports_are_reproducible(cli):
    assert cli("tcs", "count")[1] == cli("tcs", "count")[1]


def test_record_and_history(cli, tmp_path):
    cli("--record", "tcs", "count")
    cli("--record", "tcs", "count", "--pieces", "108,0")
    code, report = cli("history", "--command", "tcs count")
    assert code == EXIT_OK
    assert len(report["results"]["runs"]) == 2
    assert report["results"]["locations"]["database"] == str(tmp_path / "reports.db")
    assert ReportStore(tmp_path / "reports.db").latest("tcs count").results["count"] == 108


def test_injected_spectrum_fails_only_index_checks(cli, wrong_spectrum):
    code, report = cli("index", "suite", "--spectrum", str(wrong_spectrum))
    assert code == EXIT_CHECK_FAILED
    failed = {c["name"] for c in report["checks"] if not c["pass"]}
    assert failed == {"ac_crossing_zero", "quadric_total_multiplicity"}


def test_verify_all_isolates_a_faulty_spectrum(tmp_path, wrong_spectrum):
    config = ToolkitConfig(tmp_path / "config.json")
    config.set("model.samples", 500)
    config.set("lattice.random_triples", 20)
    config.set("contraction.random_instances", 20)
    report = verify_all(config, RateSpectrum.load(wrong_spectrum))
    failed = report.failed_checks()
    assert failed
    assert all(name.startswith("index.") for name in failed)
