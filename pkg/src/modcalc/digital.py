"""
Centered digits, digit-by-digit resolution of maps mod p^m, and square groups.
"""
import itertools
import logging
from dataclasses import dataclass, replace
from typing import Callable, Sequence, Tuple, Union

from src.modcalc.core_ring import DomainError, NotRepresentableError, centered_rep, require_prime
from src.modcalc.interp import CleanPoly, interpolate_multi

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DigitVector:
    base: int
    digits: Tuple[int, ...]

    @property
    def value(self):
        """T(q^n, x) rebuilt from the digits."""
        return sum(d * self.base ** k for k, d in enumerate(self.digits))

    def __len__(self):
        return len(self.digits)


def digit(x, q, k):
    """D_{q^k}(x) = (T(q^k, x) - T(q^(k-1), x)) / q^(k-1)."""
    if k < 1:
        raise DomainError(f"digit index starts at 1, got {k}")
    hi = centered_rep(x, q ** k)
    lo = centered_rep(x, q ** (k - 1))
    return (hi - lo) // q ** (k - 1)


def digits(x, q, n):
    if q < 2 or n < 1:
        raise DomainError(f"digits need q >= 2 and n >= 1 (q={q}, n={n})")
    return DigitVector(q, tuple(digit(x, q, k) for k in range(1, n + 1)))


def shifted_digit(x, q, p):
    """D_{(q)p}(x) = D_p((x - T(q, x)) / q)."""
    return digit((x - centered_rep(x, q)) // q, p, 1)


def encode_digit(d, p):
    return d + (p - 1) // 2


def decode_digit(c, p):
    return c - (p - 1) // 2


@dataclass(frozen=True)
class DigitResolution:
    """One polynomial per output digit, in the encoded input digits."""

    p: int
    levels: int
    polys: Tuple[CleanPoly, ...]

    def evaluate(self, x):
        p, n = self.p, self.levels
        point = tuple(encode_digit(d, p) for d in digits(x, p, n).digits)
        out = [decode_digit(poly.evaluate(point), p) for poly in self.polys]
        return sum(d * p ** k for k, d in enumerate(out)) % p ** n


def resolve_digitwise(f: Union[Callable[[int], int], Sequence[int]], p, m):
    """Resolve a map mod p^m into per-digit polynomials over the input digits."""
    require_prime(p)
    if p == 2:
        raise DomainError("centered digit encoding needs an odd prime")
    q = p ** m
    fn =f.__getitem__ if isinstance(f, (list, tuple)) else f

    # encoded digit tuple -> integer in the centered window
    inputs = {}
    for x in range(q):
        inputs[tuple(encode_digit(d, p) for d in digits(x, p, m).digits)] = x
    if len(inputs) != q:
        raise DomainError(f"centered digits do not cover Z/{q}")

    polys = []
    for k in range(1, m + 1):
        def out_digit(pt, k=k):
            return encode_digit(digit(fn(inputs[pt] % q) % q, p, k), p)
        polys.append(interpolate_multi(out_digit, p, m))
    resolution = DigitResolution(p, m, tuple(polys))

    for x in range(q):
        if resolution.evaluate(x) != fn(x) % q:
            raise NotRepresentableError(f"digit polynomials miss f({x}) mod {q}", witness=x)
    return resolution


@dataclass(frozen=True)
class SquareGroup:
    """n+1 clean functions of n+1 variables mod p."""

    p: int
    functions: Tuple[CleanPoly, ...]
    independent: bool = False

    def __post_init__(self):
        n = len(self.functions)
        if n == 0:
            raise DomainError("a square group needs at least one function")
        for f in self.functions:
            if f.nvars != n or f.prime != self.p or f.modulus != self.p:
                raise DomainError("square group functions must share p and have one variable per function")

    @property
    def nvars(self):
        return len(self.functions)

    @classmethod
    def identity(cls, p, nvars):
        return cls(p, tuple(CleanPoly.variable(i, nvars, p) for i in range(nvars)), True)

    @classmethod
    def from_table(cls, p, nvars, table):
        """Interpolate from a map point -> image point."""
        return cls(p, tuple(interpolate_multi(lambda pt, j=j: table[pt][j], p, nvars) for j in range(nvars)))

    def evaluate(self, point):
        return tuple(f.evaluate(point) for f in self.functions)

    def points(self):
        return itertools.product(range(self.p), repeat=self.nvars)

    def table(self):
        return {pt: self.evaluate(pt) for pt in self.points()}

    def image_size(self):
        return len({self.evaluate(pt) for pt in self.points()})

    def compose(self, inner):
        """(self o inner)(x) = self(inner(x)), cleaned."""
        if inner.p != self.p or inner.nvars != self.nvars:
            raise DomainError("square groups of different shape")
        funcs = tuple(f.substitute(list(inner.functions)).clean() for f in self.functions)
        return SquareGroup(self.p, funcs, self.independent and inner.independent)


def independence_check(g):
    """True iff the joint value map is onto (Z/p)^(n+1)."""
    size = g.image_size()
    logger.debug(f"square group image size {size} of {g.p ** g.nvars}")
    return size == g.p ** g.nvars


def square_invert(g):
    if not independence_check(g):
        raise DomainError("square group is not independent; no inverse exists")
    inverse = {image: pt for pt, image in g.table().items()}
    h = SquareGroup.from_table(g.p, g.nvars, inverse)
    return replace(h, independent=True)
