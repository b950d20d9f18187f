"""
Claim registry and runner.

A claim is a named, deterministic check. Running one yields a ClaimReport;
a checker exception never escapes a sweep and becomes a SKIP instead.
"""
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

from sympy import isprime

from src.modcalc.core_ring import ModcalcError, UnknownClaimError

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIP = "SKIP"


@dataclass
class ClaimReport:
    id: str
    params: Dict[str, Any]
    verdict: Verdict
    witness: Any = None
    notes: List[str] = field(default_factory=list)
    subchecks: Dict[str, str] = field(default_factory=dict)
    elapsed_ms: Optional[float] = None

    def sort_key(self):
        return self.id, json.dumps(self.params, sort_keys=True)

    def to_dict(self):
        doc = asdict(self)
        doc["verdict"] = self.verdict.value
        return doc


@dataclass(frozen=True)
class Guards:
    """Desk-scale limits shared by every checker."""

    max_p: int = 13
    max_m: int = 6
    max_q: int = 3 ** 11
    max_power_bits: int = 1 << 14
    max_exhaustive: int = 10 ** 6
    seed: int = 0
    budget: int = 10 ** 6


@dataclass(frozen=True)
class Outcome:
    """What a checker returns; passed=None means the checker declined to decide."""

    passed: Optional[bool]
    witness: Any = None
    notes: tuple = ()
    subchecks: Dict[str, bool] = field(default_factory=dict)


@dataclass(frozen=True)
class Claim:
    id: str
    title: str
    provenance: str
    checker: Callable
    defaults: Dict[str, Any]
    recheck: Optional[Callable] = None
    must_pass: Optional[Callable] = None
    report_only: bool = False


REGISTRY: Dict[str, Claim] = {}


def register(claim_id, title, provenance, defaults=None, recheck=None, must_pass=None, report_only=False):
    """Decorator adding a checker to the registry."""
    def wrap(fn):
        REGISTRY[claim_id] = Claim(claim_id, title, provenance, fn, dict(defaults or {}),
                                   recheck, must_pass, report_only)
        return fn
    return wrap


def registry():
    # checkers registers itself on import
    import src.modcalc.checkers  # noqa: F401
    return REGISTRY


def claim_ids():
    return sorted(registry())


def get_claim(claim_id):
    try:
        return registry()[claim_id]
    except KeyError:
        raise UnknownClaimError(f"unknown claim {claim_id}")


def resolve_params(claim, params=None):
    """Claim defaults overridden by the caller's values for the keys the claim takes."""
    resolved = dict(claim.defaults)
    for key, value in (params or {}).items():
        if key in resolved and value is not None:
            resolved[key] = value
    return resolved


def _guard_reason(params, guards):
    p = params.get("p")
    if p is not None:
        if not isprime(p):
            return f"p={p} is not prime"
        if p > guards.max_p:
            return f"p={p} exceeds the guard max_p={guards.max_p}"
    m = params.get("m")
    if m is not None and not 1 <= m <= guards.max_m:
        return f"m={m} is outside 1..{guards.max_m}"
    q = params.get("q")
    if q is not None and q > guards.max_q:
        return f"q={q} exceeds the guard max_q={guards.max_q}"
    return None


def _as_report(claim, params, result):
    if isinstance(result, ClaimReport):
        return ClaimReport(claim.id, params, result.verdict, result.witness,
                           list(result.notes), dict(result.subchecks))
    verdict = {True: Verdict.PASS, False: Verdict.FAIL, None: Verdict.SKIP}[result.passed]
    subchecks = {name: (Verdict.PASS if ok else Verdict.FAIL).value for name, ok in result.subchecks.items()}
    return ClaimReport(claim.id, params, verdict, result.witness, list(result.notes), subchecks)


def run_claim(claim_id, params=None, guards=None, record_timings=False):
    claim = get_claim(claim_id)
    guards = guards or Guards()
    params = resolve_params(claim, params)
    reason = _guard_reason(params, guards)
    if reason:
        logger.warning(f"Skipping {claim_id}: {reason}")
        return ClaimReport(claim_id, params, Verdict.SKIP, None, [reason])

    started = time.perf_counter()
    try:
        report = _as_report(claim, params, claim.checker(params, guards))
    except ModcalcError as e:
        logger.warning(f"Skipping {claim_id}: {e}")
        report = ClaimReport(claim_id, params, Verdict.SKIP, None, [f"{type(e).__name__}: {e}"])
    except Exception as e:
        logger.error(f"Checker for {claim_id} raised {type(e).__name__}: {e}")
        report = ClaimReport(claim_id, params, Verdict.SKIP, None, [f"{type(e).__name__}: {e}"])
    elapsed = (time.perf_counter() - started) * 1000

    if report.verdict == Verdict.FAIL:
        if report.witness is None:
            logger.error(f"{claim_id} failed without a witness")
            report.verdict = Verdict.SKIP
            report.notes.append("failure carried no witness")
        elif claim.recheck and not claim.recheck(params, report.witness):
            logger.error(f"Witness for {claim_id} did not re-verify: {report.witness}")
            report.verdict = Verdict.SKIP
            report.notes.append("witness did not re-verify")

    if claim.provenance not in report.notes:
        report.notes.insert(0, claim.provenance)
    if record_timings:
        report.elapsed_ms = round(elapsed, 3)
    logger.debug(f"{claim_id} {params}: {report.verdict.value} in {elapsed:.1f} ms")
    return report


def run_claims(ids, params=None, guards=None, threads=1, record_timings=False):
    """Run each claim once; reports come back sorted by (id, params) whatever the thread count."""
    ids = list(ids)
    for claim_id in ids:
        get_claim(claim_id)
    logger.info(f"Running {len(ids)} claims on {threads} threads")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda i: run_claim(i, params, guards, record_timings), ids))
    else:
        reports = [run_claim(i, params, guards, record_timings) for i in ids]
    reports.sort(key=ClaimReport.sort_key)
    counts = {v.value: sum(r.verdict == v for r in reports) for v in Verdict}
    logger.info(f"Claims finished: {counts}")
    return reports


def must_pass_failures(reports):
    """Ids of reports that break a must-pass gate."""
    failed = []
    for report in reports:
        claim = registry().get(report.id)
        if claim and claim.must_pass and claim.must_pass(report):
            logger.error(f"Must-pass claim {report.id} failed: {report.witness}")
            failed.append(report.id)
    return failed


def verdict_failed(report):
    return report.verdict == Verdict.FAIL


def subcheck_failed(name):
    def gate(report):
        return report.subchecks.get(name) == Verdict.FAIL.value
    return gate
