#!/usr/bin/env python3
"""
Tests for the configuration manager
"""

import json

import pytest

from utils.config import DEFAULT_CONFIG, ToolkitConfig, get_config
from utils.constants import LOCUS_TOL, NEWTON_TOL


@pytest.fixture
def config(tmp_path):
    return ToolkitConfig(tmp_path / "config.json")


def test_defaults_without_a_file(config):
    assert config.get("quartic.newton_tol") == NEWTON_TOL
    assert config.get("quartic.weights") == [1, 10, 100]
    assert config.get("quartic.locus_tol") == LOCUS_TOL
    assert config.get("missing.key", "fallback") == "fallback"


def test_set_and_section_copy(config):
    config.set("neck.p", 3.0)
    assert config.get("neck.p") == 3.0
    block = config.section("neck")
    block["p"] = 9.0
    assert config.get("neck.p") == 3.0
    assert DEFAULT_CONFIG["neck"]["p"] == 2.0


def test_file_merges_over_defaults(tmp_path, caplog):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"quartic": {"workers": 4}, "bogus": 1}))
    config = ToolkitConfig(path)
    assert config.get("quartic.workers") == 4
    assert config.get("quartic.max_iter") == DEFAULT_CONFIG["quartic"]["max_iter"]
    assert config.get("bogus") is None
    assert "unknown configuration key" in caplog.text


def test_scale_tolerances_touches_only_tolerances(config):
    config.scale_tolerances(10.0)
    assert config.get("quartic.newton_tol") == pytest.approx(10 * NEWTON_TOL)
    assert config.get("neck.fit_tol") == pytest.approx(0.2)
    assert config.get("quartic.max_iter") == DEFAULT_CONFIG["quartic"]["max_iter"]
    with pytest.raises(ValueError):
        config.scale_tolerances(0.0)


def test_save_and_reload(tmp_path):
    path = tmp_path / "nested" / "config.json"
    config = ToolkitConfig(path)
    config.set("tcs.lambda", -2.0, save=True)
    assert ToolkitConfig(path).get("tcs.lambda") == -2.0
    config.reset_to_defaults()
    assert config.get("tcs.lambda") == DEFAULT_CONFIG["tcs"]["lambda"]


def test_export(config, tmp_path):
    target = tmp_path / "export.json"
    config.export_config(str(target))
    assert json.loads(target.read_text())["index"]["spectrum"] == "quadric"


def test_global_instance_is_shared(tmp_path):
    first = get_config(tmp_path / "config.json")
    assert get_config() is first
    assert get_config(tmp_path / "other.json") is not first
