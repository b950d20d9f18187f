"""
Exact residue arithmetic over factored moduli.

Bracket notation: [a]_p is the class of a modulo p; for coprime moduli
[a]_p[b]_q is the single class modulo pq congruent to a mod p and b mod q.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Iterable, Tuple

from sympy import factorint, isprime
from sympy.ntheory import reduced_totient

logger = logging.getLogger(__name__)


class ModcalcError(Exception):
    """Root of every error raised by the library."""


class NonUnitError(ModcalcError, ValueError):
    """Argument shares a prime factor with the modulus."""


class NotPrimeError(ModcalcError, ValueError):
    """A prime was required."""


class DomainError(ModcalcError, ValueError):
    """Precondition violated."""


class NotRepresentableError(DomainError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnknownClaimError(ModcalcError, KeyError):
    pass


def require_prime(p):
    if not isprime(p):
        raise NotPrimeError(f"{p} is not prime")
    return p


def valuation(x, p):
    """Exponent of p in the nonzero integer x."""
    if x == 0:
        raise DomainError("valuation of 0 is infinite")
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class Modulus:
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        primes = [q for q, _ in self.factors]
        if len(set(primes)) != len(primes):
            raise DomainError(f"repeated prime in modulus factors {self.factors}")
        for q, k in self.factors:
            if q < 2 or k < 1 or not isprime(q):
                raise DomainError(f"bad prime-power factor {q}^{k}")
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @property
    def value(self):
        return prod(q ** k for q, k in self.factors)

    @classmethod
    def of(cls, n):
        """Factor n (trial division / sympy) into a Modulus."""
        if n < 1:
            raise DomainError(f"modulus must be positive, got {n}")
        return cls(tuple((int(q), int(k)) for q, k in factorint(n).items()))

    @classmethod
    def prime_power(cls, p, k):
        return cls(((p, k),))

    def components(self):
        """Prime-power component values, ascending by prime."""
        return [q ** k for q, k in self.factors]

    def __str__(self):
        return "·".join(f"{q}^{k}" if k > 1 else str(q) for q, k in self.factors) or "1"


@dataclass(frozen=True)
class Residue:
    """Integer class mod a Modulus, stored least-nonnegative."""

    rep: int
    modulus: Modulus

    def __post_init__(self):
        object.__setattr__(self, "rep", self.rep % self.modulus.value)

    @classmethod
    def of(cls, x, n):
        m = n if isinstance(n, Modulus) else Modulus.of(n)
        return cls(x, m)

    @property
    def n(self):
        return self.modulus.value

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise DomainError(f"mismatched moduli {self.modulus} and {other.modulus}")
            return other.rep
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else Residue(self.rep + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else Residue(self.rep - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else Residue(o - self.rep, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else Residue(self.rep * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.rep, self.modulus)

    def __pow__(self, k):
        if k < 0 and gcd(self.rep, self.n) != 1:
            raise NonUnitError(f"{self.rep} has no inverse mod {self.n}")
        return Residue(pow(self.rep, k, self.n), self.modulus)

    def inverse(self):
        return self ** -1

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.modulus == other.modulus and self.rep == other.rep
        if isinstance(other, int):
            return (other - self.rep) % self.n == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.rep, self.modulus))

    def __int__(self):
        return self.rep

    def centered(self):
        return centered_rep(self.rep, self.n)

    def is_unit(self):
        return gcd(self.rep, self.n) == 1

    def __str__(self):
        return f"{self.rep} (mod {self.n})"


@dataclass(frozen=True)
class ValuedRational:
    """
    Exact rational unit * p**valuation.

    `unit` is a Fraction whose numerator and denominator are prime to p.
    Series terms such as p**i / i! are built here and only reduced to a
    residue at the end, so a denominator divisible by p never meets a
    modular inverse.
    """

    p: int
    valuation: int = 0
    unit: Fraction = Fraction(0)
    is_zero: bool = field(default=False)

    @classmethod
    def of(cls, value, p):
        value = Fraction(value)
        if value == 0:
            return cls(p, 0, Fraction(0), True)
        num, den = value.numerator, value.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        return cls(p, v, Fraction(num, den), False)

    def to_fraction(self):
        if self.is_zero:
            return Fraction(0)
        return self.unit * Fraction(self.p) ** self.valuation

    def __mul__(self, other):
        if not isinstance(other, ValuedRational):
            other = ValuedRational.of(other, self.p)
        if self.is_zero or other.is_zero:
            return ValuedRational.of(0, self.p)
        return ValuedRational(self.p, self.valuation + other.valuation, self.unit * other.unit)

    def __truediv__(self, other):
        if not isinstance(other, ValuedRational):
            other = ValuedRational.of(other, self.p)
        if other.is_zero:
            raise ZeroDivisionError("division by exact zero")
        if self.is_zero:
            return self
        return ValuedRational(self.p, self.valuation - other.valuation, self.unit / other.unit)

    def __add__(self, other):
        if not isinstance(other, ValuedRational):
            other = ValuedRational.of(other, self.p)
        return ValuedRational.of(self.to_fraction() + other.to_fraction(), self.p)

    def __neg__(self):
        if self.is_zero:
            return self
        return ValuedRational(self.p, self.valuation, -self.unit)

    def reduce(self, modulus):
        """Residue of this value modulo `modulus` (a power of p)."""
        if self.is_zero:
            return 0
        if self.valuation < 0:
            raise DomainError(f"valuation {self.valuation} < 0 cannot be reduced mod {modulus}")
        if self.valuation > 0 and modulus % self.p == 0 and self.p ** self.valuation % modulus == 0:
            return 0
        num, den = self.unit.numerator, self.unit.denominator
        return num * pow(self.p, self.valuation, modulus) * pow(den, -1, modulus) % modulus


def centered_rep(x, q):
    """
    T(q, x): the representative of x mod q in (-q/2, q/2) for odd q and in
    (-q/2, q/2 + 1) for even q.
    """
    if q < 1:
        raise DomainError(f"centered_rep needs q >= 1, got {q}")
    r = x % q
    return r - q if r > q // 2 else r


def crt_combine(pairs: Iterable[Tuple[int, int]]) -> Residue:
    """
    [a_1]_{n_1}[a_2]_{n_2}... as a single Residue mod n_1 n_2 ...

    The moduli must be pairwise coprime.
    """
    pairs = [(a, n) for a, n in pairs]
    if not pairs:
        raise DomainError("crt_combine needs at least one congruence")
    for i, (_, n) in enumerate(pairs):
        if n < 1:
            raise DomainError(f"non-positive modulus {n}")
        for _, n2 in pairs[i + 1:]:
            if gcd(n, n2) != 1:
                raise DomainError(f"moduli {n} and {n2} are not coprime")
    total = prod(n for _, n in pairs)
    x = 0
    for a, n in pairs:
        r = total // n
        x += a * r * pow(r, -1, n) if n > 1 else 0
    return Residue.of(x, total)


def val_part(x, Q):
    """F_Q(x): the part of x made of primes of Q, i.e. prod p^n with p^n || x."""
    if x == 0:
        raise DomainError("val_part(0) is undefined")
    Q = Q if isinstance(Q, Modulus) else Modulus.of(Q)
    return prod(q ** valuation(x, q) for q, _ in Q.factors)


def radical(q):
    """P(q): product of the distinct primes dividing q; radical(1) == 1."""
    if q < 1:
        raise DomainError(f"radical needs q >= 1, got {q}")
    return prod(int(r) for r in factorint(q))


def carmichael(x):
    """sigma(x): least s with y**s == 1 (mod x) for every unit y."""
    if x < 2:
        raise DomainError(f"carmichael needs x >= 2, got {x}")
    return int(reduced_totient(x))


def unit_inverse_convention(x, p):
    """[1/x := x^{p(p-1)-1}]_{p^2}."""
    if x % p == 0:
        raise NonUnitError(f"{x} is divisible by {p}")
    n = p * p
    return Residue.of(pow(x, p * (p - 1) - 1, n), n)


def nth_root_set(x, a):
    """All y mod p with y**a == x (mod p); possibly empty."""
    p = x.n
    require_prime(p)
    if a < 1:
        raise DomainError(f"root index must be positive, got {a}")
    return frozenset(Residue(y, x.modulus) for y in range(p) if pow(y, a, p) == x.rep)
