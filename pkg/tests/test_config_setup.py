import json

import pytest

from src.modcalc.claims import Guards
from src.modcalc.config_setup import DEFAULT_CONFIG, ConfigSetup


@pytest.fixture(autouse=True)
def no_thread_override(monkeypatch):
    monkeypatch.delenv("MODCALC_THREADS", raising=False)


def test_default_config_created(tmp_path):
    path = tmp_path / "config" / "config.json"
    config = ConfigSetup(path)
    assert path.exists()
    assert json.loads(path.read_text()) == DEFAULT_CONFIG
    assert config.validate_config() == {'valid': True, 'errors': []}


def test_partial_config_falls_back_to_defaults(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"runtime": {"threads": 3}}))
    config = ConfigSetup(path)
    assert config.config["runtime"]["threads"] == 3
    assert config.config["runtime"]["seed"] == 0
    assert config.config["guards"] == DEFAULT_CONFIG["guards"]


def test_update_setting_persists(tmp_path):
    path = tmp_path / "config.json"
    ConfigSetup(path).update_setting("output", "format", "json")
    assert ConfigSetup(path).config["output"]["format"] == "json"


def test_validation_errors(tmp_path, monkeypatch):
    config = ConfigSetup(tmp_path / "config.json")
    config.config["output"]["format"] = "xml"
    config.config["guards"]["max_p"] = 0
    errors = config.validate_config()['errors']
    assert "output format must be json or csv" in errors
    assert "guard max_p must be a positive integer" in errors
    monkeypatch.setenv("MODCALC_THREADS", "many")
    assert "MODCALC_THREADS is not an integer" in config.validate_config()['errors']


def test_thread_override_order(tmp_path, monkeypatch):
    config = ConfigSetup(tmp_path / "config.json")
    assert config.run_config().threads == 1
    monkeypatch.setenv("MODCALC_THREADS", "4")
    assert config.run_config().threads == 4
    assert config.run_config(threads=2).threads == 2


def test_run_config_guards_and_flags(tmp_path):
    run = ConfigSetup(tmp_path / "config.json").run_config(seed=9, output="x.json", fmt="json",
                                                           record_timings=True)
    assert run.guards == Guards(max_p=13, max_m=6, max_q=177147, max_power_bits=16384,
                                max_exhaustive=1000000, seed=9, budget=1000000)
    assert run.claims_report == "x.json"
    assert run.format == "json"
    assert run.record_timings
    assert run.cache_directory == ".cache/dlog"
