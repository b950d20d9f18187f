"""
Truncated exponential and logarithm series modulo p^m.

E = sum p^i/i! generates the principal units 1 + pZ mod p^m; a full
generator e is chosen with e^(1-p^m) = E. Every series coefficient is built
as an exact ValuedRational and reduced only at the end.
"""
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import ceil, factorial
from typing import Sequence, Tuple, Union

from sympy import Poly, symbols
from sympy.ntheory import is_primitive_root

from src.modcalc.core_ring import (
    DomainError,
    Modulus,
    NonUnitError,
    Residue,
    ValuedRational,
    crt_combine,
    require_prime,
    valuation,
)
from src.modcalc.dlog_cache import default_cache

logger = logging.getLogger(__name__)

X = symbols("x")


def default_terms(p, m):
    if p == 2:
        return 2 * m + 4
    return (m + 2) * ceil((p - 1) / (p - 2)) + p


@dataclass(frozen=True)
class PrecisionContext:
    """A prime p, precision m, and the series truncation depth."""

    p: int
    m: int
    n_terms: int = 0
    even_only: bool = False

    def __post_init__(self):
        require_prime(self.p)
        if self.m < 1:
            raise DomainError(f"precision must be >= 1, got {self.m}")
        if self.p == 2 and not self.even_only:
            raise DomainError("p = 2 is only supported by the even-argument series")
        if self.n_terms <= 0:
            object.__setattr__(self, "n_terms", default_terms(self.p, self.m))
        # omitted terms must vanish mod p^m
        if not self.even_only and self.tail_valuation() < self.m:
            raise DomainError(f"{self.n_terms} series terms are too few for precision {self.m} at p={self.p}")

    @property
    def modulus(self):
        return self.p ** self.m

    @property
    def group_order(self):
        return self.p ** (self.m - 1) * (self.p - 1)

    def with_precision(self, m):
        return PrecisionContext(self.p, m, 0, self.even_only)

    def with_terms(self, n_terms):
        return replace(self, n_terms=n_terms)

    def tail_valuation(self):
        """Valuation of the first omitted exponential term p^n/n!."""
        n = self.n_terms + 1
        return n - valuation(factorial(n), self.p)


@lru_cache(maxsize=256)
def exp_coefficients(p, modulus, n_terms):
    """p^i/i! mod modulus for i = 0..n_terms."""
    return tuple(
        ValuedRational.of(Fraction(p ** i, factorial(i)), p).reduce(modulus)
        for i in range(n_terms + 1)
    )


@lru_cache(maxsize=256)
def log_coefficients(p, modulus, n_terms):
    """(-1)^(i+1) p^(i-1)/i mod modulus for i = 0..n_terms (index 0 is 0)."""
    coeffs = [0]
    for i in range(1, n_terms + 1):
        coeffs.append(ValuedRational.of(Fraction((-1) ** (i + 1) * p ** (i - 1), i), p).reduce(modulus))
    return tuple(coeffs)


def _horner(coeffs, x, modulus):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % modulus
    return acc


def _require_odd(ctx):
    if ctx.p == 2 or ctx.even_only:
        raise DomainError("the main exponential path needs an odd prime")


def compute_E(ctx):
    _require_odd(ctx)
    q = ctx.modulus
    return Residue.of(sum(exp_coefficients(ctx.p, q, ctx.n_terms)) % q, q)


def pow_E(x, ctx):
    """E^x by the series sum p^i x^i / i!."""
    _require_odd(ctx)
    q = ctx.modulus
    return Residue.of(_horner(exp_coefficients(ctx.p, q, ctx.n_terms), x % q, q), q)


@dataclass(frozen=True)
class GeneratorPair:
    ctx: PrecisionContext
    e: Residue
    E: Residue


@dataclass(frozen=True)
class LogValue:
    value: Residue
    base: int

    @property
    def rep(self):
        return self.value.rep

    @property
    def order(self):
        return self.value.n

    def __str__(self):
        return f"{self.value.rep} (mod {self.value.n})"


@lru_cache(maxsize=128)
def find_generator(ctx):
    """
    Smallest e >= 2 generating the units mod p^m with e^(1-p^m) = E.

    e^(1-p^m) is the principal-unit part of e, so the candidates are
    w(a)·E with w(a) = a^(p^(m-1)) the Teichmuller lift of a primitive root a mod p.
    """
    _require_odd(ctx)
    p, q = ctx.p, ctx.modulus
    E = compute_E(ctx)
    lift = p ** (ctx.m - 1)
    candidates = sorted(
        pow(a, lift, q) * E.rep % q for a in range(1, p) if is_primitive_root(a, p)
    )
    for e in candidates:
        if e >= 2 and is_primitive_root(e, q) and pow(e, 1 - q, q) == E.rep:
            logger.debug(f"generator for {p}^{ctx.m}: e={e}, E={E.rep}")
            return GeneratorPair(ctx, Residue.of(e, q), E)
    raise DomainError(f"no generator compatible with E mod {q}")


def lm_principal(u, ctx):
    """lm_E(u) mod p^(m-1) for u = 1 (mod p), via the alternating series."""
    _require_odd(ctx)
    p, q = ctx.p, ctx.modulus
    u = int(u) % q
    if u % p != 1:
        raise DomainError(f"{u} is not 1 mod {p}")
    target = p ** (ctx.m - 1)
    x = (u - 1) // p
    value = _horner(log_coefficients(p, target, ctx.n_terms), x % target, target)
    return LogValue(Residue.of(value, target), compute_E(ctx).rep)


def lm_full(x, gp, cache=None):
    """lm_e(x) mod p^(m-1)(p-1): e^result = x (mod p^m)."""
    ctx = gp.ctx
    p, q = ctx.p, ctx.modulus
    x = int(x) % q
    if x % p == 0:
        raise NonUnitError(f"{x} is not a unit mod {p}")
    cache = cache or default_cache()
    e = gp.e.rep
    torsion = cache.log_mod_p(x, p, e % p)
    principal = lm_principal(pow(x, 1 - q, q), ctx).rep
    combined = crt_combine([(torsion, p - 1), (principal, p ** (ctx.m - 1))])
    if pow(e, combined.rep, q) != x:
        raise DomainError(f"logarithm of {x} mod {q} failed its power check")
    return LogValue(combined, e)


def lm_extended(x, gp, cache=None):
    """lm on all of Z/p^m minus 0 mod p^2, with lm(pk) := plm(k) (mod p^(m-1) on that branch)."""
    ctx = gp.ctx
    p = ctx.p
    if x % p:
        return lm_full(x, gp, cache)
    k = x // p
    if k % p == 0:
        raise NonUnitError(f"{x} is divisible by {p}^2")
    value = plm(k, ctx).rep % p ** (ctx.m - 1)
    return LogValue(Residue.of(value, p ** (ctx.m - 1)), gp.e.rep)


@dataclass(frozen=True)
class CompositeLog:
    """Per prime-power component logarithms of one argument."""

    x: int
    modulus: Modulus
    components: Tuple[Tuple[int, GeneratorPair, LogValue], ...]

    def reconstruct(self):
        """Exponentiate each component's generator and recombine mod Q."""
        pairs = []
        for n, gp, lv in self.components:
            pairs.append((pow(gp.e.rep, lv.rep, n), n))
        return crt_combine(pairs)

    def __str__(self):
        return "(" + ", ".join(str(lv) for _, _, lv in self.components) + ")"


def lm_composite(x, Q, cache=None):
    Q = Q if isinstance(Q, Modulus) else Modulus.of(Q)
    comps = []
    for p, k in Q.factors:
        if p == 2:
            raise DomainError("composite logarithm needs odd prime components")
        if x % p == 0:
            raise NonUnitError(f"{x} shares the factor {p} with {Q.value}")
        gp = find_generator(PrecisionContext(p, k))
        comps.append((p ** k, gp, lm_full(x, gp, cache)))
    return CompositeLog(x, Q, tuple(comps))


def plm(x, ctx):
    """(x^(p^m (1-p^m)) - 1) / p^m mod p^m, numerator taken mod p^(2m)."""
    p, q = ctx.p, ctx.modulus
    if x % p == 0:
        raise NonUnitError(f"{x} is not a unit mod {p}")
    numerator = (pow(x, q * (1 - q), q * q) - 1) % (q * q)
    return Residue.of(numerator // q, q)


def plm_series(x, ctx):
    """sum (-1)^(i+1) w^i / i with w = x^(1-p^m) - 1, mod p^m."""
    p, q = ctx.p, ctx.modulus
    if x % p == 0:
        raise NonUnitError(f"{x} is not a unit mod {p}")
    w = (pow(x, 1 - q, q * p) - 1) % (q * p)
    w1 = w // p
    total = 0
    for i in range(1, ctx.n_terms + 1):
        coeff = ValuedRational.of(Fraction((-1) ** (i + 1) * p ** i, i), p).reduce(q)
        total += coeff * pow(w1, i, q)
    return Residue.of(total, q)


def sqrt_e(a, gp, cache=None):
    """
    a^(1/2) := e^(L/2) mod p with L the least representative of lm(a) mod p-1.

    Odd L is halved in the cycle of length p-1 and flagged as a non-residue;
    returns (root, is_residue).
    """
    p = gp.ctx.p
    if a % p == 0:
        raise NonUnitError(f"{a} is not a unit mod {p}")
    cache = cache or default_cache()
    e = gp.e.rep % p
    L = cache.log_mod_p(a, p, e)
    if L % 2 == 0:
        return Residue.of(pow(e, L // 2, p), p), True
    return Residue.of(pow(e, (L + p - 1) // 2, p), p), False


def pth_root_unit(w, ctx):
    """The y = 1 (mod p) mod p^m with y^p = w (mod p^(m+1)), for w = 1 (mod p^2)."""
    _require_odd(ctx)
    p = ctx.p
    w = int(w) % p ** (ctx.m + 1)
    if w % (p * p) != 1:
        raise DomainError(f"{w} is not 1 mod {p * p}")
    L = lm_principal(w, ctx.with_precision(ctx.m + 1)).rep
    return pow_E(L // p, ctx)


def _as_poly(f):
    if isinstance(f, Poly):
        return f
    return Poly(list(reversed(list(f))) or [0], X)


def modulated_derivative(f: Union[Poly, Sequence[int]], ctx):
    """(f(x + p^m) - f(x)) / p^m mod p^m, as low-to-high coefficients."""
    q = ctx.modulus
    poly = _as_poly(f)
    diff = poly.shift(q) - poly
    coeffs = []
    for c in reversed(diff.all_coeffs()):
        c = int(c)
        if c % q:
            raise DomainError("difference quotient is not integral")
        coeffs.append((c // q) % q)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def even_series_exp(x, ctx):
    """exp(2x) = sum 2^i x^i / i! mod 2^m, even x only."""
    if ctx.p != 2:
        raise DomainError("even-argument series are for p = 2")
    if x % 2:
        raise DomainError(f"{x} is odd; the series needs an even argument")
    q = ctx.modulus
    return Residue.of(_horner(exp_coefficients(2, q, ctx.n_terms), x % q, q), q)


def even_series_log(u, ctx):
    """log(u)/2 mod 2^(m-1) for u = 1 (mod 4), an even value."""
    if ctx.p != 2:
        raise DomainError("even-argument series are for p = 2")
    q = ctx.modulus
    u = int(u) % q
    if ctx.m >= 2 and u % 4 != 1:
        raise DomainError(f"{u} is not 1 mod 4")
    target = 2 ** (ctx.m - 1)
    x = (u - 1) // 2
    return Residue.of(_horner(log_coefficients(2, target, ctx.n_terms), x % target, target), target)
