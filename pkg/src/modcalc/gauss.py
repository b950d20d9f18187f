"""
Gaussian integers modulo p^m for p = 3 (mod 4), and the pseudo-imaginary
unit for p = 1 (mod 4).
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from src.modcalc.core_ring import DomainError, NonUnitError, crt_combine, require_prime
from src.modcalc.padic_analytic import exp_coefficients

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaussianResidue:
    re: int
    im: int
    modulus: int
    p: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "re", self.re % self.modulus)
        object.__setattr__(self, "im", self.im % self.modulus)

    def _check(self, other):
        if other.modulus != self.modulus:
            raise DomainError(f"mismatched moduli {self.modulus} and {other.modulus}")

    def _like(self, re, im):
        return GaussianResidue(re, im, self.modulus, self.p)

    def __add__(self, other):
        self._check(other)
        return self._like(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        self._check(other)
        return self._like(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return self._like(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, int):
            return self._like(self.re * other, self.im * other)
        self._check(other)
        return self._like(self.re * other.re - self.im * other.im,
                          self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conj(self):
        return self._like(self.re, -self.im)

    def norm(self):
        return (self.re * self.re + self.im * self.im) % self.modulus

    def inverse(self):
        try:
            n_inv = pow(self.norm(), -1, self.modulus)
        except ValueError:
            raise NonUnitError(f"{self} is not invertible mod {self.modulus}")
        return self.conj() * n_inv

    def __pow__(self, k):
        base = self if k >= 0 else self.inverse()
        result = self._like(1, 0)
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __str__(self):
        return f"{self.re} + {self.im}i (mod {self.modulus})"


def _gaussian_prime(p):
    require_prime(p)
    if p % 4 != 3:
        raise DomainError(f"{p} is not 3 mod 4")


def gauss_arith(a, b, op):
    if op == '+':
        return a + b
    if op in ('*', '·'):
        return a * b
    if op == 'conj':
        return a.conj()
    raise DomainError(f"unknown Gaussian operation {op!r}")


def gauss_bracket(z1, z2):
    """[a+bi]_q1 [a'+b'i]_q2 = [a]_q1[a']_q2 + i [b]_q1[b']_q2 mod q1 q2."""
    re = crt_combine([(z1.re, z1.modulus), (z2.re, z2.modulus)])
    im = crt_combine([(z1.im, z1.modulus), (z2.im, z2.modulus)])
    return GaussianResidue(re.rep, im.rep, re.n)


@dataclass(frozen=True)
class UnitCircle:
    p: int
    elements: Tuple[GaussianResidue, ...]
    frobenius_ok: bool

    @property
    def order(self):
        return len(self.elements)


def unit_circle(p):
    """All z mod p with z z* = 1, with the check z^p = z* on each."""
    _gaussian_prime(p)
    elements = tuple(
        GaussianResidue(a, b, p, p)
        for a in range(p) for b in range(p)
        if (a * a + b * b) % p == 1
    )
    frobenius_ok = all(z ** p == z.conj() for z in elements)
    logger.debug(f"unit circle mod {p}: order {len(elements)}, z^p = z* on all: {frobenius_ok}")
    return UnitCircle(p, elements, frobenius_ok)


def exp_i(ctx):
    """E^i = sum p^j i^j / j! mod p^m."""
    _gaussian_prime(ctx.p)
    q = ctx.modulus
    re = im = 0
    for j, c in enumerate(exp_coefficients(ctx.p, q, ctx.n_terms)):
        sign = -1 if j % 4 in (2, 3) else 1
        if j % 2:
            im += sign * c
        else:
            re += sign * c
    return GaussianResidue(re, im, q, ctx.p)


def exp_gauss(a, b, gp):
    """e^(a+bi) := e^a (E^i)^b mod p^m."""
    ctx = gp.ctx
    q = ctx.modulus
    real = GaussianResidue(pow(gp.e.rep, a, q), 0, q, ctx.p)
    return real * exp_i(ctx) ** b


def rational_point(p, a, b):
    """(2ab + (a^2 - b^2) i) / (a^2 + b^2) mod p."""
    n = (a * a + b * b) % p
    if n == 0:
        raise DomainError(f"{p} divides a^2 + b^2 for (a, b) = ({a}, {b})")
    inv = pow(n, -1, p)
    return GaussianResidue(2 * a * b * inv, (a * a - b * b) * inv, p, p)


def rational_point_image(p):
    points = set()
    for a in range(p):
        for b in range(p):
            if (a * a + b * b) % p:
                points.add(rational_point(p, a, b))
    return points


@dataclass(frozen=True)
class PseudoImaginary:
    p: int
    m: int
    omega: int

    @property
    def modulus(self):
        return self.p ** self.m

    def conjugate(self):
        return (-self.omega) % self.modulus


def find_omega(p, m):
    """Smallest root of x^2 + 1 mod p^m, lifted from the smallest root mod p."""
    require_prime(p)
    if p % 4 != 1:
        raise DomainError(f"{p} is not 1 mod 4")
    root = next(x for x in range(1, p) if (x * x + 1) % p == 0)
    mod = p
    for _ in range(1, m):
        mod *= p
        fx = (root * root + 1) % mod
        root = (root - fx * pow(2 * root, -1, mod)) % mod
    q = p ** m
    omega = min(root, q - root)
    return PseudoImaginary(p, m, omega)


def pseudo_conjugation_sound(p, m):
    """
    Scan every (a, b) mod p^m: a + b w = 0 and a - b w = 0 must force a = b = 0.
    Returns (ok, witness).
    """
    pi = find_omega(p, m)
    q, w = pi.modulus, pi.omega
    for a in range(q):
        for b in range(q):
            if (a + b * w) % q == 0 and (a - b * w) % q == 0 and (a or b):
                return False, (a, b)
    return True, None
