"""
Calculus of clean functions mod p.

Derivatives come in three equivalent flavours on clean input (Hasse ladder,
kernel sum, formal shift sum). Integration pairs a function with the kernel
I^t(x) = -sum_{i=0}^{p-2} x^(p-1-i) t^(i+1) / (i+1).
"""
import itertools
import logging
from dataclasses import dataclass
from math import ceil, comb
from typing import Dict, Tuple

from src.modcalc.core_ring import DomainError, require_prime
from src.modcalc.interp import CleanPoly, interpolate_fn, interpolate_multi

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CalcFn:
    poly: CleanPoly

    @classmethod
    def of(cls, coefficients, p):
        """Univariate function from low-to-high coefficients."""
        return cls(CleanPoly.univariate(coefficients, p))

    @classmethod
    def from_table(cls, table):
        return cls(interpolate_fn(table))

    @property
    def p(self):
        return self.poly.prime

    @property
    def nvars(self):
        return self.poly.nvars

    @property
    def reduced(self):
        return self.poly.is_reduced()

    def __call__(self, *point):
        return self.poly.evaluate(point)

    def table(self):
        if self.nvars != 1:
            raise DomainError("table() is for univariate functions")
        return [self.poly.evaluate((x,)) for x in range(self.p)]


def _univariate(f):
    if f.nvars != 1:
        raise DomainError("expected a univariate function")


def hasse_derivative(poly, order, var=0):
    """(d^order/dx_var^order)/order! with exact binomials."""
    out = {}
    for exps, c in poly.coeffs.items():
        e = exps[var]
        if e < order:
            continue
        k = list(exps)
        k[var] = e - order
        out[tuple(k)] = out.get(tuple(k), 0) + c * comb(e, order)
    return CleanPoly(poly.nvars, poly.prime, poly.modulus, out)


def ladder_orders(p, degree):
    """Derivative orders 1, p, 2p-1, ... of the d_k ladder up to stabilization."""
    k_max = ceil(max(degree, 0) / (p - 1)) + 1
    return [n * (p - 1) + 1 for n in range(k_max + 1)]


def clean_derivative(f, var=0):
    poly = f.poly
    p = poly.prime
    total = CleanPoly.zero(poly.nvars, p)
    for order in ladder_orders(p, poly.degree(var)):
        total = total + hasse_derivative(poly, order, var)
    return CalcFn(total.clean())


def _fix(poly, var, t):
    """poly with variable `var` set to the constant t (still in nvars variables)."""
    out = {}
    for exps, c in poly.coeffs.items():
        k = list(exps)
        e = k[var]
        k[var] = 0
        out[tuple(k)] = out.get(tuple(k), 0) + c * pow(t, e, poly.modulus)
    return CleanPoly(poly.nvars, poly.prime, poly.modulus, out)


def clean_derivative_kernel(f, var=0):
    """-sum_t f(.., t, ..) (t - x_var)^(p-2)."""
    poly = f.poly
    p, n = poly.prime, poly.nvars
    x = CleanPoly.variable(var, n, p)
    total = CleanPoly.zero(n, p)
    for t in range(p):
        total = total + _fix(poly, var, t) * ((x * -1 + t) ** (p - 2))
    return CalcFn((-total).clean())


def modular_derivative_formal(f, var=0):
    """-sum_{t != 0} f(x + t) / t, with 1/t taken as t^(p-2)."""
    poly = f.poly
    p, n = poly.prime, poly.nvars
    total = CleanPoly.zero(n, p)
    for t in range(1, p):
        images = [CleanPoly.variable(j, n, p) + (t if j == var else 0) for j in range(n)]
        total = total + poly.substitute(images) * pow(t, p - 2, p)
    return CalcFn((-total).clean())


@dataclass(frozen=True)
class IntegralKernel:
    p: int
    poly: CleanPoly
    table: Tuple[Tuple[int, ...], ...]

    def value(self, t, x):
        return self.table[t % self.p][x % self.p]

    def two_point(self, t, t0, x):
        """I^t_{t0}(x) = I^t(x) - I^{t0}(x)."""
        return (self.value(t, x) - self.value(t0, x)) % self.p


_kernels: Dict[int, IntegralKernel] = {}


def kernel_I(p):
    require_prime(p)
    if p == 2:
        raise DomainError("the integration kernel needs an odd prime")
    if p not in _kernels:
        coeffs = {}
        for i in range(p - 1):
            # variables are (t, x)
            coeffs[(i + 1, p - 1 - i)] = -pow(i + 1, -1, p)
        poly = CleanPoly(2, p, p, coeffs)
        table = tuple(tuple(poly.evaluate((t, x)) for x in range(p)) for t in range(p))
        _kernels[p] = IntegralKernel(p, poly, table)
    return _kernels[p]


def definite_integral(f, t):
    """sum_x f(x) I^t(x); f must be reduced."""
    _univariate(f)
    if not f.reduced:
        raise DomainError("definite_integral needs a reduced function")
    p = f.p
    kern = kernel_I(p)
    return sum(f(x) * kern.value(t, x) for x in range(p)) % p


def dt_kernel(p, t):
    """Weights K_t(u) with f(t)·Dt = sum_u f(u) K_t(u)."""
    kern = kernel_I(p)
    tail = kern.value(t, 1)
    return tuple((kern.value(t, u) - kern.value(t - 1, u) - tail) % p for u in range(p))


def dt_pairing(f, t):
    """f(t)·Dt = f·I^t(t) - f·I^(t-1)(t) - f·I^t(1), each pairing summed over x."""
    _univariate(f)
    p = f.p
    weights = dt_kernel(p, t)
    return sum(f(u) * w for u, w in zip(range(p), weights)) % p


def f_I(f, point):
    """f(x_0..x_n) · prod_i Dx_i at one point."""
    p, n = f.p, f.nvars
    kernels = [dt_kernel(p, x) for x in point]
    total = 0
    for u in itertools.product(range(p), repeat=n):
        w = 1
        for i in range(n):
            w = w * kernels[i][u[i]] % p
        if w:
            total += f.poly.evaluate(u) * w
    return total % p


def interval_integral(f, a, b, shift=0):
    """
    int_a^b f Dx: sum of f(x)·Dx over the integer track x in (a, b].

    With shift C the pairing is taken against D(x + C): the function is
    re-indexed so that the kernel sees x + C.
    """
    _univariate(f)
    p = f.p
    if not shift:
        return sum(dt_pairing(f, x) for x in range(a + 1, b + 1)) % p
    shifted = CalcFn.from_table([f((u - shift) % p) for u in range(p)])
    return sum(dt_pairing(shifted, x + shift) for x in range(a + 1, b + 1)) % p


def area_integral(f, area):
    """sum over the points of `area` of f · prod Dx_i."""
    return sum(f_I(f, pt) for pt in set(area)) % f.p


@dataclass(frozen=True)
class SummationTables:
    f_I: Tuple[int, ...]
    f_sigma: Tuple[int, ...]
    f_delta: Tuple[int, ...]
    wraps: bool
    track: str = "0..p-1"


def summation_calculus(f):
    """f^I, f^Sigma and f^Delta on the canonical track 0, 1, ..., p-1."""
    _univariate(f)
    p = f.p
    fi = tuple(dt_pairing(f, x) for x in range(p))
    sigma = [0]
    for x in range(1, p):
        sigma.append((sigma[-1] + fi[x]) % p)
    delta = list(sigma)
    # a full lap returns to 0 only when the pairings sum to 0
    wraps = (delta[-1] + fi[0]) % p != 0
    if wraps:
        logger.debug(f"original function is track dependent mod {p}")
    return SummationTables(fi, tuple(sigma), tuple(delta), wraps)


@dataclass(frozen=True)
class MultiSummation:
    p: int
    nvars: int
    f_I: Dict[Tuple[int, ...], int]
    f_sigma: Dict[Tuple[int, ...], int]
    f_delta: Dict[Tuple[int, ...], int]


def summation_calculus_multi(f):
    """Box sums f^Sigma and the diagonal original function f^Delta in several variables."""
    p, n = f.p, f.nvars
    grid = list(itertools.product(range(p), repeat=n))
    fi = {pt: f_I(f, pt) for pt in grid}
    sigma = {}
    for t in grid:
        box = itertools.product(*[range(ti + 1) for ti in t])
        sigma[t] = sum(fi[u] for u in box) % p
    delta = {}
    for pt in grid:
        if min(pt) == 0:
            delta[pt] = 0
    for pt in sorted(grid, key=min):
        if min(pt) > 0:
            prev = tuple(x - 1 for x in pt)
            delta[pt] = (delta[prev] + fi[pt]) % p
    return MultiSummation(p, n, fi, sigma, delta)


def iterated_integral(f, bounds):
    """prod_i int_{a_i}^{b_i}: sum of f^I over the box of tracks (a_i, b_i]."""
    ranges = [range(a + 1, b + 1) for a, b in bounds]
    return sum(f_I(f, pt) for pt in itertools.product(*ranges)) % f.p


def box_difference(table, bounds, p):
    """prod_i Delta_{x_i=a_i}^{b_i} applied to a table on the grid."""
    total = 0
    for choice in itertools.product((0, 1), repeat=len(bounds)):
        pt = tuple(b if c else a for c, (a, b) in zip(choice, bounds))
        sign = -1 if (len(bounds) - sum(choice)) % 2 else 1
        total += sign * table[pt]
    return total % p


def integral_as_function(f):
    """t -> definite_integral(f, t), as a clean function."""
    return CalcFn.from_table([definite_integral(f, t) for t in range(f.p)])


def multi_from_table(table, p, nvars):
    return CalcFn(interpolate_multi(lambda pt: table[pt], p, nvars))
