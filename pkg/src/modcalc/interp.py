"""
Polynomial form of functions modulo p and p^n.

Every map (Z/p)^n -> Z/p is a polynomial with per-variable degree at most
p-1; interpolate_fn and interpolate_multi recover it from a value table.
local_expand writes a function mod p^n as a sum of branches, one per class
of x mod p.
"""
import itertools
import logging
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Dict, Tuple

import numpy as np
from sympy import Matrix, isprime
from sympy.functions.combinatorial.numbers import stirling
from sympy.ntheory import is_primitive_root

from src.modcalc.core_ring import DomainError, NotPrimeError, NotRepresentableError, require_prime

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CleanPoly:
    """
    Multivariate polynomial with coefficients mod `modulus` (a power of `prime`).

    Exponents are kept as given; clean() folds x^p -> x when the coefficient
    modulus is the prime itself.
    """

    nvars: int
    prime: int
    modulus: int
    coeffs: Dict[Tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        normalized = {}
        for exps, c in self.coeffs.items():
            exps = tuple(exps)
            if len(exps) != self.nvars:
                raise DomainError(f"exponent tuple {exps} does not match {self.nvars} variables")
            c %= self.modulus
            if c:
                normalized[exps] = (normalized.get(exps, 0) + c) % self.modulus
        object.__setattr__(self, "coeffs", {k: v for k, v in normalized.items() if v})

    @classmethod
    def zero(cls, nvars, p, modulus=None):
        return cls(nvars, p, modulus or p, {})

    @classmethod
    def constant(cls, c, nvars, p, modulus=None):
        return cls(nvars, p, modulus or p, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i, nvars, p, modulus=None):
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, p, modulus or p, {exps: 1})

    @classmethod
    def univariate(cls, coefficients, p, modulus=None):
        """From a low-to-high coefficient list."""
        return cls(1, p, modulus or p, {(k,): c for k, c in enumerate(coefficients)})

    def _like(self, coeffs):
        return CleanPoly(self.nvars, self.prime, self.modulus, coeffs)

    def _check(self, other):
        if (other.nvars, other.prime, other.modulus) != (self.nvars, self.prime, self.modulus):
            raise DomainError("polynomials live over different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = CleanPoly.constant(other, self.nvars, self.prime, self.modulus)
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, CleanPoly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._like({k: c * other for k, c in self.coeffs.items()})
        self._check(other)
        out = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + c1 * c2
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = CleanPoly.constant(1, self.nvars, self.prime, self.modulus)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, CleanPoly):
            return NotImplemented
        return (self.nvars, self.prime, self.modulus, self.coeffs) == (
            other.nvars, other.prime, other.modulus, other.coeffs)

    def __hash__(self):
        return hash((self.nvars, self.prime, self.modulus, frozenset(self.coeffs.items())))

    def is_zero(self):
        return not self.coeffs

    def evaluate(self, point):
        if isinstance(point, int):
            point = (point,)
        if len(point) != self.nvars:
            raise DomainError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = 0
        for exps, c in self.coeffs.items():
            term = c
            for x, e in zip(point, exps):
                term = term * pow(x, e, self.modulus) % self.modulus
            total += term
        return total % self.modulus

    __call__ = evaluate

    def degree(self, var=None):
        """Per-variable degree, or total degree when var is None; -1 for zero."""
        if not self.coeffs:
            return -1
        if var is None:
            return max(sum(k) for k in self.coeffs)
        return max(k[var] for k in self.coeffs)

    def is_clean(self):
        return all(e <= self.prime - 1 for k in self.coeffs for e in k)

    def is_reduced(self):
        """Clean, and no term carries degree p-1 in any single variable."""
        return all(e < self.prime - 1 for k in self.coeffs for e in k)

    def clean(self):
        if self.modulus != self.prime:
            raise DomainError("only polynomials mod p have a clean form")
        p = self.prime
        return self._like({
            tuple(e if e < p else (e - 1) % (p - 1) + 1 for e in k): c
            for k, c in self.coeffs.items()
        })

    def substitute(self, images):
        """Compose with polynomials: variable j -> images[j]."""
        if len(images) != self.nvars:
            raise DomainError("substitution needs one image per variable")
        template = images[0]
        result = CleanPoly.zero(template.nvars, template.prime, template.modulus)
        for exps, c in self.coeffs.items():
            term = CleanPoly.constant(c, template.nvars, template.prime, template.modulus)
            for img, e in zip(images, exps):
                term = term * (img ** e)
            result = result + term
        return result

    def table(self):
        """Values over the whole grid (Z/p)^n, keyed by point."""
        return {pt: self.evaluate(pt) for pt in itertools.product(range(self.prime), repeat=self.nvars)}

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = ["x", "y", "z"] if self.nvars <= 3 else [f"x{i}" for i in range(self.nvars)]
        terms = []
        for exps in sorted(self.coeffs, reverse=True):
            mono = "*".join(
                f"{names[i]}^{e}" if e > 1 else names[i] for i, e in enumerate(exps) if e
            )
            c = self.coeffs[exps]
            terms.append(f"{c}*{mono}" if mono and c != 1 else mono or str(c))
        return " + ".join(terms)


def _lagrange_matrix(p):
    """L[a, j]: coefficient of x^j in delta(x - a) = 1 - (x - a)^(p-1)."""
    L = np.zeros((p, p), dtype=object)
    for a in range(p):
        for j in range(p):
            L[a, j] = ((1 if j == 0 else 0) - comb(p - 1, j) * pow(-a, p - 1 - j)) % p
    return L


def interpolate_fn(table):
    """The unique polynomial of degree <= p-1 through (x, table[x]), x = 0..p-1."""
    p = len(table)
    if not isprime(p):
        raise NotPrimeError(f"table length {p} is not prime; the Vandermonde system is singular")
    return interpolate_multi(lambda pt: table[pt[0]], p, 1)


def interpolate_multi(fn, p, nvars):
    """Tensor-product interpolation of fn: (Z/p)^nvars -> Z/p."""
    require_prime(p)
    if nvars < 1:
        raise DomainError("interpolation needs at least one variable")
    grid = np.zeros((p,) * nvars, dtype=object)
    for pt in itertools.product(range(p), repeat=nvars):
        grid[pt] = fn(pt) % p
    L = _lagrange_matrix(p)
    for _ in range(nvars):
        # contracting axis 0 appends the new axis last, so nvars passes restore the order
        grid = np.tensordot(grid, L, axes=([0], [0])) % p
    coeffs = {}
    for exps in itertools.product(range(p), repeat=nvars):
        c = int(grid[exps])
        if c:
            coeffs[exps] = c
    return CleanPoly(nvars, p, p, coeffs)


def vandermonde_det(p):
    """Determinant mod p of the multiplicative Vandermonde matrix [a^j], a = 1..p-1, j = 0..p-2."""
    require_prime(p)
    M = Matrix(p - 1, p - 1, lambda a, j: pow(a + 1, j))
    return int(M.det()) % p


def exp_table(e, p):
    """[e^0, e^1, ..., e^(p-2)] mod p for a generator e."""
    require_prime(p)
    if p == 2:
        return [1]
    if e % p == 0 or not is_primitive_root(e % p, p):
        raise DomainError(f"{e} does not generate the units mod {p}")
    table = [1]
    for _ in range(p - 2):
        table.append(table[-1] * e % p)
    return table


@dataclass(frozen=True)
class LocalExpansion:
    prime: int
    precision: int
    branches: Tuple[Tuple[int, ...], ...]

    @property
    def modulus(self):
        return self.prime ** self.precision

    def evaluate(self, x):
        p, n, q = self.prime, self.precision, self.modulus
        exponent = p ** (n - 1) * (p - 1)
        total = 0
        for i, coeffs in enumerate(self.branches):
            d = (x - i) % q
            indicator = (1 - pow(d, exponent, q)) % q
            if not indicator:
                continue
            total += indicator * sum(a * pow(d, k, q) for k, a in enumerate(coeffs))
        return total % q

    def table(self):
        return [self.evaluate(x) for x in range(self.modulus)]


def local_expand(values, p, n):
    """
    Branch coefficients a[i][k] with f(x) = sum_k a[i][k] (x - i)^k for x = i (mod p).

    Raises NotRepresentableError (witness = first mismatching x) when no such
    degree-(n-1) branch form reproduces the table.
    """
    require_prime(p)
    q = p ** n
    if len(values) != q:
        raise DomainError(f"expected {q} values, got {len(values)}")
    if n > p:
        raise DomainError(f"branch construction needs n <= p (n={n}, p={p})")
    values = [v % q for v in values]
    span = p ** (n - 1)
    branches = []
    for i in range(p):
        g = [values[i + p * z] for z in range(span)]
        # forward differences at 0 give the binomial-basis coefficients
        diffs, row = [], g[:n]
        for _ in range(len(row)):
            diffs.append(row[0])
            row = [(b - a) % q for a, b in zip(row, row[1:])]
        coeffs = []
        for k in range(n):
            b_k = 0
            for j in range(k, len(diffs)):
                s = int(stirling(j, k, kind=1, signed=True))
                b_k += s * diffs[j] * pow(factorial(j), -1, q)
            # a b_k not divisible by p^k is truncated here and caught by the table check below
            coeffs.append((b_k % q) // p ** k)
        branches.append(tuple(coeffs))
    expansion = LocalExpansion(p, n, tuple(branches))
    for x in range(q):
        if expansion.evaluate(x) != values[x]:
            raise NotRepresentableError(f"branch form disagrees with the table at x={x}", witness=x)
    logger.debug(f"local expansion mod {q}: {expansion.branches}")
    return expansion
