import json

import pytest

from src.modcalc.main import EXIT_INPUT, EXIT_MUST_PASS, EXIT_OK, main


@pytest.fixture
def base(tmp_path, monkeypatch):
    monkeypatch.delenv("MODCALC_THREADS", raising=False)
    return ["--config", str(tmp_path / "config.json"), "--cache-dir", str(tmp_path / "dlog")]


def test_eval_lm(base, capsys):
    assert main(base + ["eval", "lm", "--p", "3", "--m", "2", "--x", "7"]) == EXIT_OK
    assert capsys.readouterr().out == "2 (mod 6), e=5\n"


def test_eval_E(base, capsys):
    assert main(base + ["eval", "E", "--p", "3", "--m", "3"]) == EXIT_OK
    assert capsys.readouterr().out == "13 (mod 27)\n"


def test_eval_lm_of_non_unit(base, capsys):
    assert main(base + ["eval", "lm", "--p", "3", "--m", "2", "--x", "3"]) == EXIT_INPUT
    assert capsys.readouterr().out == ""


def test_eval_composite_lm(base, capsys):
    assert main(base + ["eval", "lm", "--q", "225", "--x", "224"]) == EXIT_OK
    assert capsys.readouterr().out == "(3 (mod 6), 10 (mod 20))\n"


def test_eval_kernel_and_digits(base, capsys):
    assert main(base + ["eval", "I", "--p", "3", "--t", "1", "--x", "2"]) == EXIT_OK
    assert capsys.readouterr().out == "1 (mod 3)\n"
    assert main(base + ["eval", "digits", "--q", "3", "--n", "3", "--x", "7"]) == EXIT_OK
    assert capsys.readouterr().out == "1 -1 1 (base 3)\n"


def test_eval_missing_argument(base):
    assert main(base + ["eval", "plm", "--p", "3"]) == EXIT_INPUT


def test_claims_run_single(base, tmp_path):
    out = tmp_path / "claims.json"
    assert main(base + ["claims", "run", "--id", "C4", "--p", "3", "--m", "2", "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert len(doc) == 1
    assert doc[0]["id"] == "C4"
    assert doc[0]["verdict"] == "PASS"
    assert doc[0]["params"] == {"p": 3, "m": 2}


def test_claims_run_unknown(base, tmp_path):
    assert main(base + ["claims", "run", "--id", "C99", "--out", str(tmp_path / "x.json")]) == EXIT_INPUT


def test_claims_run_needs_a_selection(base):
    assert main(base + ["claims", "run"]) == EXIT_INPUT


def test_full_sweep_identical_across_thread_counts(base, tmp_path):
    one, eight = tmp_path / "one.json", tmp_path / "eight.json"
    assert main(base + ["claims", "run", "--all", "--p", "3", "--threads", "1", "--out", str(one)]) == EXIT_OK
    assert main(base + ["claims", "run", "--all", "--p", "3", "--threads", "8", "--out", str(eight)]) == EXIT_OK
    assert one.read_bytes() == eight.read_bytes()
    assert all(report["elapsed_ms"] is None for report in json.loads(one.read_text()))


def test_claims_must_pass_failure_exit_code(base, tmp_path, monkeypatch):
    from src.modcalc import claims
    from src.modcalc.claims import Claim, Outcome, verdict_failed

    claims.registry()
    monkeypatch.setitem(claims.REGISTRY, "T-gate", Claim(
        "T-gate", "always fails", "test", lambda params, guards: Outcome(False, {"x": 0}), {},
        None, verdict_failed))
    out = tmp_path / "gate.json"
    assert main(base + ["claims", "run", "--id", "T-gate", "--out", str(out)]) == EXIT_MUST_PASS
    assert json.loads(out.read_text())[0]["verdict"] == "FAIL"


def test_claims_list(base, capsys):
    assert main(base + ["claims", "list"]) == EXIT_OK
    listed = capsys.readouterr().out.split()
    assert "C4" in listed and "C-ccc2" in listed


def test_search_relaxed(base, tmp_path):
    out = tmp_path / "search.csv"
    args = ["search", "--amax", "10", "--bmax", "10", "--cmax", "10", "--p", "3", "--q", "2", "--out", str(out)]
    assert main(base + args) == EXIT_OK
    assert out.read_text() == "a,b,c,p,q\n1,2,3,3,2\n"


def test_search_json_to_stdout(base, capsys):
    args = ["search", "--amax", "10", "--cmax", "10", "--p", "3", "--q", "2", "--format", "json", "--out", "-"]
    assert main(base + args) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == [{"a": 1, "b": 2, "c": 3, "p": 3, "q": 2}]


def test_search_strict_window_is_empty(base, tmp_path):
    out = tmp_path / "strict.csv"
    args = ["search", "--amax", "5", "--cmax", "5", "--p", "41", "43", "--q", "41", "42", "--strict",
            "--out", str(out)]
    assert main(base + args) == EXIT_OK
    assert out.read_text() == "a,b,c,p,q\n"


def test_search_bad_range(base, tmp_path):
    args = ["search", "--amax", "0", "--cmax", "10", "--p", "3", "--q", "2", "--out", str(tmp_path / "s.csv")]
    assert main(base + args) == EXIT_INPUT


def test_cache_inspect_and_clear(base, capsys):
    assert main(base + ["eval", "lm", "--p", "5", "--m", "2", "--x", "2"]) == EXIT_OK
    capsys.readouterr()
    assert main(base + ["cache", "inspect"]) == EXIT_OK
    entries = json.loads(capsys.readouterr().out)
    assert entries and all(entry["valid"] for entry in entries)
    assert main(base + ["cache", "clear"]) == EXIT_OK
    assert capsys.readouterr().out == f"Removed {len(entries)} cache files\n"


def test_no_subcommand_is_a_usage_error(base):
    assert main(base) == EXIT_INPUT


def test_search_non_primitive_flag(base, tmp_path):
    out = tmp_path / "all.csv"
    args = ["search", "--amax", "10", "--cmax", "10", "--p", "3", "--q", "2", "--non-primitive", "--out", str(out)]
    assert main(base + args) == EXIT_OK
    assert out.read_text() == "a,b,c,p,q\n1,2,3,3,2\n2,2,4,3,2\n"


def test_search_help_states_primitive_default(base, capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(base + ["search", "--help"])
    assert exit_info.value.code == 0
    help_text = " ".join(capsys.readouterr().out.split())
    assert "Only primitive rows" in help_text
    assert "default: primitive rows only" in help_text
