import json

from src.modcalc.claims import ClaimReport, Verdict
from src.modcalc.dioph import DiophInstance
from utils.report_io import (
    claims_document,
    read_claims_report,
    search_document,
    write_claims_report,
    write_search_results,
)


def _reports():
    return [
        ClaimReport("C1", {"p": 3}, Verdict.PASS, None, ["ok"], {"basis_independence": "PASS"}),
        ClaimReport("C30", {"a_max": 30}, Verdict.FAIL, {"a": 1, "b": 2}, [], {}, 1.5),
    ]


def test_claims_document_is_stable_json(tmp_path):
    path = write_claims_report(_reports(), tmp_path / "out" / "claims.json")
    text = path.read_text()
    assert text == claims_document(_reports())
    doc = read_claims_report(path)
    assert [r["id"] for r in doc] == ["C1", "C30"]
    assert doc[0]["verdict"] == "PASS"
    assert doc[0]["elapsed_ms"] is None
    assert doc[1]["witness"] == {"a": 1, "b": 2}
    assert text.endswith("]\n")


def test_tuple_witnesses_serialise():
    report = ClaimReport("C25", {"p": 3}, Verdict.FAIL, ((0, 0), (0, 1)))
    doc = json.loads(claims_document([report]))
    assert doc[0]["witness"] == [[0, 0], [0, 1]]


def test_search_csv_and_json(tmp_path):
    rows = [DiophInstance(1, 2, 3, 3, 2)]
    assert search_document(rows) == "a,b,c,p,q\n1,2,3,3,2\n"
    assert search_document([]) == "a,b,c,p,q\n"
    assert json.loads(search_document(rows, "json")) == [{"a": 1, "b": 2, "c": 3, "p": 3, "q": 2}]
    path = write_search_results(rows, tmp_path / "search.csv")
    assert path.read_text() == "a,b,c,p,q\n1,2,3,3,2\n"
