import json

from src.modcalc.dlog_cache import DlogCache, bsgs


def test_bsgs_finds_smallest_exponent():
    assert bsgs(3, 2, 7, 6) == 2
    assert bsgs(2, 1, 11, 10) == 0
    assert bsgs(2, 3, 7, 3) is None


def test_power_table_written_and_reloaded(tmp_cache):
    table = tmp_cache.powers(3, 2, 5)
    assert table == [1, 5, 7, 8, 4, 2]
    path = tmp_cache.path_for(3, 2, 5)
    assert path.name == "dlog_p3_m2_e5.json"
    doc = json.loads(path.read_text())
    assert doc == {"p": 3, "m": 2, "e": 5, "modulus": 9, "powers": table}

    fresh = DlogCache(tmp_cache.directory)
    assert fresh.powers(3, 2, 5) == table


def test_corrupt_file_is_rebuilt(tmp_cache):
    tmp_cache.directory.mkdir(parents=True)
    path = tmp_cache.path_for(7, 1, 3)
    path.write_text('{"p": 7, "m": 1, "e": 3, "modulus": 7, "powers": [1, 4, 2]}')
    assert tmp_cache.powers(7, 1, 3) == [1, 3, 2, 6, 4, 5]
    assert json.loads(path.read_text())["powers"] == [1, 3, 2, 6, 4, 5]


def test_log_mod_p(tmp_cache):
    assert tmp_cache.log_mod_p(2, 7, 3) == 2
    assert tmp_cache.log_mod_p(1, 7, 3) == 0


def test_inspect_and_clear(tmp_cache):
    tmp_cache.powers(5, 1, 2)
    entries = tmp_cache.inspect()
    assert entries == [{'file': 'dlog_p5_m1_e2.json', 'p': 5, 'm': 1, 'e': 2, 'size': 4, 'valid': True}]
    assert tmp_cache.clear() == 1
    assert tmp_cache.inspect() == []


def test_disabled_cache_writes_nothing(tmp_path):
    cache = DlogCache(tmp_path / "off", enabled=False)
    assert cache.powers(5, 1, 2) == [1, 2, 4, 3]
    assert not (tmp_path / "off").exists()
