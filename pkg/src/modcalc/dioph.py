"""
Exhaustive search for a^p + b^p = c^q, the ratio condition, and the
logarithm-distinctness checker for prime-power moduli.
"""
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from sympy import isprime

from src.modcalc.claims import ClaimReport, Verdict
from src.modcalc.core_ring import DomainError, Modulus, NonUnitError, radical
from src.modcalc.padic_analytic import lm_composite
from utils.lcg import Lcg

logger = logging.getLogger(__name__)

# c^q mod these must match a^p + b^p mod these before the exact comparison
FILTER_MODULI = (7, 9, 11, 13, 16, 17, 19, 23)
STRICT_MIN_EXPONENT = 41


@dataclass(frozen=True, order=True)
class DiophInstance:
    a: int
    b: int
    c: int
    p: int
    q: int

    @property
    def primitive(self):
        return gcd(self.a, self.b) == 1 and gcd(self.b, self.c) == 1 and gcd(self.a, self.c) == 1

    @property
    def strict(self):
        return (
            self.a > 0 and self.b > 0 and self.primitive and isprime(self.p)
            and self.p >= STRICT_MIN_EXPONENT and self.q >= STRICT_MIN_EXPONENT
        )

    def holds(self):
        return self.a ** self.p + self.b ** self.p == self.c ** self.q

    def as_row(self):
        return {"a": self.a, "b": self.b, "c": self.c, "p": self.p, "q": self.q}


def _exponent_allowed(p, q, strict):
    if not strict:
        return True
    return isprime(p) and p >= STRICT_MIN_EXPONENT and q >= STRICT_MIN_EXPONENT


def dioph_search(a_max, b_max, c_max, p_set, q_set, strict=False, primitive=True,
                 use_filters=True, max_power_bits=None):
    """
    Every (a, b, c, p, q) with 1 <= a <= b, c <= c_max and a^p + b^p = c^q.

    Rows come back sorted by (a, b, c, p, q). Strict mode keeps only
    pairwise-coprime rows with p prime and p, q >= 41; `primitive` alone
    asks for pairwise coprimality.
    """
    if min(a_max, b_max, c_max) < 1:
        raise DomainError(f"search ranges must be positive (a_max={a_max}, b_max={b_max}, c_max={c_max})")
    p_set, q_set = sorted(set(p_set)), sorted(set(q_set))
    if not p_set or not q_set:
        raise DomainError("exponent sets must be nonempty")
    if min(p_set + q_set) < 1:
        raise DomainError("exponents must be positive")
    if max_power_bits:
        widest = max(max(p_set) * max(a_max, b_max).bit_length(), max(q_set) * c_max.bit_length())
        if widest > max_power_bits:
            raise DomainError(f"powers need about {widest} bits, over the budget of {max_power_bits}")

    found = []
    for q in q_set:
        powers = {c ** q: c for c in range(1, c_max + 1)}
        residues = {m: {v % m for v in powers} for m in FILTER_MODULI}
        for p in p_set:
            if not _exponent_allowed(p, q, strict):
                continue
            filtered = 0
            for a in range(1, a_max + 1):
                ap = a ** p
                for b in range(a, b_max + 1):
                    s = ap + b ** p
                    if use_filters and any(s % m not in residues[m] for m in FILTER_MODULI):
                        filtered += 1
                        continue
                    c = powers.get(s)
                    if c is None:
                        continue
                    row = DiophInstance(a, b, c, p, q)
                    if (strict or primitive) and not row.primitive:
                        continue
                    found.append(row)
            logger.debug(f"exponents (p={p}, q={q}): {filtered} sums rejected by residue filters")
        logger.info(f"Finished exponent q={q}; {len(found)} solutions so far")
    return sorted(found)


def ratio_condition(p, q):
    """q/p <= 6 * floor((q - 2)/39), compared exactly."""
    if p < 1 or q < 1:
        raise DomainError("ratio condition needs positive p and q")
    return Fraction(q, p) <= 6 * ((q - 2) // 39)


VARIANTS = {
    # id, modulus for the comparison as a function of q and P(q)
    "q2": ("C28", lambda q, r: q * q),
    "q4": ("C29", lambda q, r: q ** 4 // r ** 5),
}


def _admissible(a, primes):
    return all(a % p for p in primes)


def _pair_ok(a, b, primes):
    return all((a - b) % p and (a + b) % p for p in primes)


def log_distinct_check(q, budget=10 ** 6, seed=0, variant="q2", cache=None):
    """
    Look for 0 < b < a < q/P^3(q), both units, a != +-b mod every p | q, with
    lm(a) = lm(b) modulo q^2 (or q^4/P^5(q)). Scans exhaustively when the
    pair count fits the budget, otherwise draws `budget` seeded pairs.
    """
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    if q < 3 or q % 2 == 0:
        raise DomainError(f"log_distinct_check needs an odd q >= 3, got {q}")
    claim_id, modulus_of = VARIANTS[variant]
    started = time.perf_counter()
    factors = Modulus.of(q).factors
    primes = [p for p, _ in factors]
    r = radical(q)
    notes = ["hypotheses: P^11(q) | q, 0 < b < a < q/P^3(q), a != +-b mod each p | q"]
    faithful = q % r ** 11 == 0
    if not faithful:
        logger.warning(f"q={q} does not satisfy P^11(q) | q; running in smoke mode")
        notes.append("smoke mode: P^11(q) does not divide q")

    bound = -(-q // r ** 3)
    target = modulus_of(q, r)
    notes.append(f"logarithms compared mod {target}")
    candidates = [a for a in range(1, bound) if _admissible(a, primes)]
    params = {"q": q, "budget": budget, "seed": seed, "variant": variant}
    # units mod 3 are only +-1, so a 3 | q leaves no pair with a != +-b
    if 3 in primes or len(candidates) < 2:
        notes.append("no admissible pairs below the bound; the statement holds vacuously")
        return ClaimReport(claim_id, params, Verdict.PASS, None, notes)

    logs = {}

    def log_of(x):
        if x not in logs:
            comp = lm_composite(x, target, cache)
            logs[x] = tuple(lv.rep for _, _, lv in comp.components)
        return logs[x]

    witness = None
    upper = len(candidates) * (len(candidates) - 1) // 2
    if upper <= budget:
        notes.append(f"exhaustive over {len(candidates)} candidates")
        buckets = {}
        for a in candidates:
            buckets.setdefault(log_of(a), []).append(a)
        for members in buckets.values():
            hit = next(((a, b) for i, a in enumerate(members) for b in members[:i] if _pair_ok(a, b, primes)), None)
            if hit:
                witness = {"a": max(hit), "b": min(hit), "modulus": target}
                break
    else:
        notes.append(f"sampled {budget} of about {upper} pairs with seed {seed}")
        rng = Lcg(seed)
        drawn = 0
        while drawn < budget and witness is None:
            a, b = rng.choice(candidates), rng.choice(candidates)
            if a == b or not _pair_ok(a, b, primes):
                continue
            drawn += 1
            if log_of(a) == log_of(b):
                witness = {"a": max(a, b), "b": min(a, b), "modulus": target}
    elapsed = (time.perf_counter() - started) * 1000
    logger.info(f"log_distinct_check q={q} ({variant}) finished in {elapsed:.0f} ms")
    verdict = Verdict.FAIL if witness else Verdict.PASS
    return ClaimReport(claim_id, params, verdict, witness, notes)


def logs_collide(a, b, modulus, cache=None):
    """Direct re-check of a collision: both logarithms recomputed and compared."""
    try:
        la = lm_composite(a, modulus, cache)
        lb = lm_composite(b, modulus, cache)
    except NonUnitError:
        return False
    return all(x.rep == y.rep for (_, _, x), (_, _, y) in zip(la.components, lb.components))
