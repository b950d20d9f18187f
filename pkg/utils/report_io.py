"""
Report and search-result writers shared by the CLI.

Claims reports are JSON only; search rows are flat, so CSV is the default
there and JSON the alternative.
"""
import csv
import io
import json
import logging
from pathlib import Path

logger = logging.getLogger(__name__)

SEARCH_FIELDS = ("a", "b", "c", "p", "q")


def _jsonable(value):
    # tuples and dict keys that json cannot take directly
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in value]
        return sorted(items, key=repr) if isinstance(value, (set, frozenset)) else items
    if hasattr(value, "item"):
        return value.item()
    return value


def claims_document(reports):
    return json.dumps([_jsonable(r.to_dict()) for r in reports], indent=2, sort_keys=True) + "\n"


def write_claims_report(reports, path):
    """Write the sorted report array; the bytes depend only on the reports."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(claims_document(reports))
    logger.info(f"Wrote {len(reports)} claim reports to {path}")
    return path


def search_document(rows, fmt="csv"):
    rows = [r.as_row() if hasattr(r, "as_row") else dict(r) for r in rows]
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown search format {fmt!r}")
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SEARCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def write_search_results(rows, path, fmt="csv"):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(search_document(rows, fmt))
    logger.info(f"Wrote {len(rows)} search rows to {path}")
    return path


def read_claims_report(path):
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)
