#!/usr/bin/env python3
"""
Tests for run reports and the report history store
"""

import numpy as np
import pytest
import sympy

from cli.report import RunReport, jsonable
from data.report_store import ReportStore


def make_report(command="tcs count", count=216):
    report = RunReport(command, {"pieces": [108, 108]}, {"count": count})
    report.check("count", 216, count)
    return report


@pytest.fixture
def store(tmp_path):
    return ReportStore(tmp_path / "reports.db")


def test_jsonable_plain_types():
    assert jsonable(np.int64(3)) == 3
    assert jsonable(np.array([1.0, 2.0])) == [1.0, 2.0]
    assert jsonable(1 + 2j) == [1.0, 2.0]
    assert jsonable(sympy.sqrt(5) - 1) == "-1 + sqrt(5)"
    assert jsonable(float("inf")) == "inf"
    assert jsonable({1: (2, 3)}) == {"1": [2, 3]}


def test_checks_with_and_without_tolerance():
    report = RunReport("x")
    assert report.check("exact", 2, 2)
    assert report.check("close", 0.25, 0.25 + 1e-12, tolerance=1e-9)
    assert not report.check("far", 0.25, 0.3, tolerance=1e-9)
    assert not report.check("flag", True, False)
    assert not report.passed
    assert report.failed_checks() == ["far", "flag"]


def test_merge_prefixes_checks():
    total = RunReport("verify-all")
    total.merge(make_report(), "tcs")
    assert total.checks[0].name == "tcs.count"
    assert total.results["tcs"] == {"count": 216}


def test_report_round_trip():
    report = make_report()
    again = RunReport.from_dict(report.to_dict())
    assert again.to_dict() == report.to_dict()
    assert "all checks passed" in report.table()


def test_record_and_latest(store):
    assert store.latest("tcs count") is None
    first = store.record(make_report())
    second = store.record(make_report(count=108))
    assert second > first
    latest = store.latest("tcs count")
    assert latest.results == {"count": 108}
    assert not latest.passed


def test_history_filters_by_command(store):
    store.record(make_report())
    store.record(make_report("index compact"))
    rows = store.history()
    assert [r["command"] for r in rows] == ["index compact", "tcs count"]
    assert rows[1]["checks"] == 1
    assert [r["command"] for r in store.history(command="tcs count")] == ["tcs count"]


def test_compare_to_latest_lists_changed_checks(store):
    assert store.compare_to_latest(make_report()) == []
    store.record(make_report())
    assert store.compare_to_latest(make_report()) == []
    assert store.compare_to_latest(make_report(count=0)) == ["count"]


def test_cleanup_keeps_newest(store):
    for _ in range(5):
        store.record(make_report())
    assert store.cleanup(keep=2) == 3
    assert len(store.history()) == 2
    assert store.cleanup(keep=2) == 0
