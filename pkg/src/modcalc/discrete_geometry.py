"""
Boxes, chains, modular differentials and span functions over (Z/p)^n.

Variables of a span function with n originals and K difference levels are
laid out as x_0..x_{n-1}, then Delta_1 x_0..Delta_1 x_{n-1}, ..., Delta_K x_*.
"""
import itertools
import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Dict, Tuple

from sympy import Matrix

from src.modcalc.claims import ClaimReport, Verdict
from src.modcalc.core_ring import DomainError, require_prime
from src.modcalc.digital import SquareGroup, independence_check, square_invert
from src.modcalc.fp_calculus import CalcFn, clean_derivative, dt_pairing, hasse_derivative, iterated_integral
from src.modcalc.interp import CleanPoly, interpolate_multi

logger = logging.getLogger(__name__)

# freezing rule used by every line path: coordinates before the moving one sit at their end value
FREEZING = "lexicographic: l_i moves x_i with x_j (j < i) at their end value and x_j (j > i) at their start value"


@dataclass(frozen=True)
class Box:
    """Product of closed integer intervals; a degenerate interval (a, a) is a point."""

    intervals: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if not self.intervals:
            raise DomainError("a box needs at least one dimension")
        object.__setattr__(self, "intervals", tuple((int(a), int(b)) for a, b in self.intervals))
        for a, b in self.intervals:
            if a > b:
                raise DomainError(f"interval [{a}, {b}] is reversed")

    @property
    def dim(self):
        return len(self.intervals)

    @property
    def axes(self):
        return [i for i, (a, b) in enumerate(self.intervals) if a != b]

    @property
    def order(self):
        return len(self.axes)

    def wraps(self, p):
        return any(b - a >= p for a, b in self.intervals)

    def face(self, axis, end):
        iv = list(self.intervals)
        v = iv[axis][1] if end else iv[axis][0]
        iv[axis] = (v, v)
        return Box(tuple(iv))


Chain = Dict[Box, int]


def chain_add(*chains):
    out = {}
    for chain in chains:
        for cell, c in chain.items():
            out[cell] = out.get(cell, 0) + c
    return {cell: c for cell, c in out.items() if c}


def boundary(cells):
    """Alternating-orientation facet chain of a box or a chain of boxes."""
    if isinstance(cells, Box):
        cells = {cells: 1}
    out = {}
    for cell, coeff in cells.items():
        for k, axis in enumerate(cell.axes):
            sign = -1 if k % 2 else 1
            for end, s in ((True, sign), (False, -sign)):
                face = cell.face(axis, end)
                out[face] = out.get(face, 0) + coeff * s
    return {cell: c for cell, c in out.items() if c}


def staircase_path(start, end):
    """l = sum_i l_i from start to end, one axis-aligned edge per moving coordinate."""
    if len(start) != len(end):
        raise DomainError("endpoints of different dimension")
    chain = {}
    n = len(start)
    for i in range(n):
        if start[i] == end[i]:
            continue
        pos = [end[j] if j < i else start[j] for j in range(n)]
        lo, hi = sorted((start[i], end[i]))
        iv = [(v, v) for v in pos]
        iv[i] = (lo, hi)
        chain = chain_add(chain, {Box(tuple(iv)): 1 if start[i] < end[i] else -1})
    return chain


@dataclass(frozen=True)
class DiffForm:
    """sum over index tuples I of components[I] Dx_I; antisymmetric forms keep I increasing."""

    degree: int
    dim: int
    p: int
    components: Dict[Tuple[int, ...], CleanPoly] = field(default_factory=dict)
    antisymmetric: bool = True

    def __post_init__(self):
        comps = {}
        for idx, poly in self.components.items():
            idx = tuple(idx)
            if len(idx) != self.degree:
                raise DomainError(f"index {idx} does not match degree {self.degree}")
            if poly.nvars != self.dim:
                raise DomainError("component arity differs from the ambient dimension")
            if self.antisymmetric:
                if len(set(idx)) != len(idx):
                    continue
                sign = _permutation_sign(idx)
                idx = tuple(sorted(idx))
                poly = poly * sign
            comps[idx] = comps[idx] + poly if idx in comps else poly
        object.__setattr__(self, "components", {k: v for k, v in comps.items() if not v.is_zero()})

    def is_zero(self):
        return not self.components

    def __add__(self, other):
        merged = dict(self.components)
        for k, v in other.components.items():
            merged[k] = merged[k] + v if k in merged else v
        return DiffForm(self.degree, self.dim, self.p, merged, self.antisymmetric and other.antisymmetric)

    def __str__(self):
        if not self.components:
            return "0"
        joiner = "∧" if self.antisymmetric else "⊗"
        return " + ".join(
            f"({poly}) " + joiner.join(f"Dx{i}" for i in idx) for idx, poly in sorted(self.components.items())
        )


def _permutation_sign(idx):
    sign = 1
    idx = list(idx)
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign


def differential(f):
    """DF = sum_i (DF/Dx_i) Dx_i with clean partials."""
    n = f.nvars
    comps = {(i,): clean_derivative(f, i).poly for i in range(n)}
    return DiffForm(1, n, f.p, comps, True)


def wedge_derivative(form):
    if not form.antisymmetric:
        raise DomainError("the wedge derivative needs an antisymmetric form")
    comps = {}
    for idx, poly in form.components.items():
        for j in range(form.dim):
            if j in idx:
                continue
            partial = clean_derivative(CalcFn(poly), j).poly
            if partial.is_zero():
                continue
            new_idx = (j,) + idx
            sign = _permutation_sign(new_idx)
            key = tuple(sorted(new_idx))
            term = partial * sign
            comps[key] = comps[key] + term if key in comps else term
    return DiffForm(form.degree + 1, form.dim, form.p, comps, True)


def _restrict(poly, axis, frozen):
    """Univariate function along `axis` with the other coordinates fixed."""
    p = poly.prime
    table = []
    for x in range(p):
        pt = list(frozen)
        pt[axis] = x
        table.append(poly.evaluate(tuple(v % p for v in pt)))
    return CalcFn.from_table(table)


def line_integral(form, chain):
    """sum over edges of sum_{x in (a, b]} f_i(.., x, ..)·Dx along the moving axis."""
    if form.degree != 1:
        raise DomainError("line integrals take degree-1 forms")
    p = form.p
    total = 0
    for edge, coeff in chain.items():
        if edge.order != 1:
            raise DomainError(f"edge {edge.intervals} is not axis-aligned")
        axis = edge.axes[0]
        poly = form.components.get((axis,))
        if poly is None:
            continue
        frozen = [a for a, _ in edge.intervals]
        g = _restrict(poly, axis, frozen)
        a, b = edge.intervals[axis]
        total += coeff * sum(dt_pairing(g, x) for x in range(a + 1, b + 1))
    return total % p


def area_integral_2form(form, box):
    """int over (a, b] x (c, d] of the Dx0∧Dx1 coefficient."""
    if form.degree != 2 or form.dim != 2:
        raise DomainError("area integrals here take a 2-form in 2 dimensions")
    poly = form.components.get((0, 1))
    if poly is None:
        return 0
    return iterated_integral(CalcFn(poly), box.intervals)


def stokes_check(form, box):
    """int_D D^∧F against int_{∂D} F for a 1-form on a 2-D box."""
    require_prime(form.p)
    if form.p == 2:
        raise DomainError("Stokes comparison needs an odd prime")
    if box.dim != 2 or box.order != 2:
        raise DomainError("Stokes comparison needs a non-degenerate 2-D box")
    inner = area_integral_2form(wedge_derivative(form), box)
    edge = line_integral(form, boundary(box))
    passed = inner == edge
    return ClaimReport(
        id="C21",
        params={"p": form.p, "box": [list(iv) for iv in box.intervals]},
        verdict=Verdict.PASS if passed else Verdict.FAIL,
        witness=None if passed else {"area": inner, "boundary": edge, "form": str(form)},
        notes=[FREEZING],
    )


@dataclass(frozen=True)
class SpanFn:
    """Clean polynomial in originals x_i and differences Delta_k x_i (k = 1..levels)."""

    poly: CleanPoly
    n: int
    levels: int = 1

    def __post_init__(self):
        if self.poly.nvars != self.n * (1 + self.levels):
            raise DomainError("span function variable count does not match n and levels")

    @property
    def p(self):
        return self.poly.prime

    @classmethod
    def of(cls, poly, n, levels=0):
        """Lift a polynomial in the originals to a span function with `levels` difference levels."""
        return cls(embed(poly, n * (1 + levels)), n, levels)

    def delta_degree(self, exps):
        return sum(exps[self.n:])

    def evaluate(self, x, deltas=()):
        return self.poly.evaluate(tuple(x) + tuple(v for level in deltas for v in level))

    def __add__(self, other):
        return SpanFn(self.poly + other.poly, self.n, self.levels)

    def __sub__(self, other):
        return SpanFn(self.poly - other.poly, self.n, self.levels)

    def __mul__(self, other):
        return SpanFn((self.poly * other.poly).clean(), self.n, self.levels)

    def is_zero(self):
        return self.poly.is_zero()


def embed(poly, nvars, offset=0):
    """Same polynomial viewed in a ring with more variables."""
    coeffs = {}
    for exps, c in poly.coeffs.items():
        k = [0] * nvars
        k[offset:offset + len(exps)] = exps
        coeffs[tuple(k)] = c
    return CleanPoly(nvars, poly.prime, poly.modulus, coeffs)


def _add_level(s):
    """s with a fresh, unused difference level appended."""
    n, K = s.n, s.levels
    return SpanFn(embed(s.poly, n * (K + 2)), n, K + 1)


def span_difference(s):
    """Delta s = s(x + Delta_{K+1} x) - s(x); earlier differences are constant (Delta'Delta x = 0)."""
    lifted = _add_level(s)
    n, K = s.n, s.levels
    total = n * (K + 2)
    images = []
    for j in range(total):
        var = CleanPoly.variable(j, total, s.p)
        if j < n:
            var = var + CleanPoly.variable(n * (K + 1) + j, total, s.p)
        images.append(var)
    shifted = lifted.poly.substitute(images).clean()
    return SpanFn((shifted - lifted.poly).clean(), n, K + 1)


def operator_series_difference(s, reading="hasse"):
    """
    sum_{n>=1} (sum_i Delta x_i D/Dx_i)^n / n! applied to s.

    reading="hasse" takes D_i^a / a! as divided-power (Hasse) derivatives;
    reading="iterated" iterates the clean derivative and divides by a! mod p,
    dropping terms where p | a!.
    """
    lifted = _add_level(s)
    n, K, p = s.n, s.levels, s.p
    total_vars = n * (K + 2)
    result = CleanPoly.zero(total_vars, p)
    degree = max(lifted.poly.degree(i) for i in range(n)) if not lifted.poly.is_zero() else 0
    for alpha in itertools.product(range(degree + 1), repeat=n):
        if sum(alpha) == 0:
            continue
        term = lifted.poly
        skip = False
        for i, a in enumerate(alpha):
            if reading == "hasse":
                term = hasse_derivative(term, a, i)
            else:
                for _ in range(a):
                    term = clean_derivative(CalcFn(term), i).poly
                if factorial(a) % p == 0:
                    skip = True
                    break
                term = term * pow(factorial(a), -1, p)
        if skip or term.is_zero():
            continue
        mono = {tuple(alpha[j - n * (K + 1)] if j >= n * (K + 1) else 0 for j in range(total_vars)): 1}
        result = result + term * CleanPoly(total_vars, p, p, mono)
    return SpanFn(result.clean(), n, K + 1)


@dataclass(frozen=True)
class DiffTensor:
    """Differential tensor: same layout as a span function with Delta_k x_i read as D_k x_i."""

    poly: CleanPoly
    n: int
    levels: int = 1

    def degree_of(self, exps):
        return sum(exps[self.n:])

    def __str__(self):
        if self.poly.is_zero():
            return "0"
        names = [f"x{i}" for i in range(self.n)]
        for k in range(1, self.levels + 1):
            names += [f"D{k}x{i}" for i in range(self.n)]
        terms = []
        for exps, c in sorted(self.poly.coeffs.items()):
            factors = [f"{names[j]}^{e}" if e > 1 else names[j] for j, e in enumerate(exps) if e]
            terms.append("*".join([str(c)] + factors) if c != 1 or not factors else "*".join(factors))
        return " + ".join(terms)


def tensor_correspondence(s):
    """TC: Delta_k x_i -> D_k x_i."""
    return DiffTensor(s.poly, s.n, s.levels)


def span_correspondence(t):
    """SC: D_k x_i -> Delta_k x_i."""
    return SpanFn(t.poly, t.n, t.levels)


def ld_extract(s):
    """Terms of lowest total degree in the difference variables."""
    if s.is_zero():
        return s
    low = min(s.delta_degree(k) for k in s.poly.coeffs)
    kept = {k: c for k, c in s.poly.coeffs.items() if s.delta_degree(k) == low}
    return SpanFn(CleanPoly(s.poly.nvars, s.p, s.p, kept), s.n, s.levels)


def partial_at(values, point, axis, p):
    """Clean partial of a value table at a point: -sum_t v(.., t, ..) (t - x_axis)^(p-2)."""
    total = 0
    for t in range(p):
        pt = list(point)
        pt[axis] = t
        total += values[tuple(pt)] * pow(t - point[axis], p - 2, p)
    return (-total) % p


def jacobian_at(tables, point, p):
    n = len(tables)
    return [[partial_at(tables[i], point, j, p) for j in range(n)] for i in range(n)]


def geometry_derivation(group, point):
    """det of the clean partial-derivative matrix of the group at a point, mod p."""
    p = group.p
    point = tuple(v % p for v in point)
    rows = []
    for f in group.functions:
        rows.append([clean_derivative(CalcFn(f), j).poly.evaluate(point) for j in range(group.nvars)])
    return int(Matrix(rows).det()) % p


def _group_tables(group):
    pts = list(group.points())
    return [{pt: f.evaluate(pt) for pt in pts} for f in group.functions]


def relative_chain(group, point):
    """
    Points Q carrying a delta branch (some f_j(Q) != 0) whose value the clean
    partials at `point` depend on, found by perturbing each value in turn.
    """
    p = group.p
    point = tuple(v % p for v in point)
    tables = _group_tables(group)
    base = jacobian_at(tables, point, p)
    chain = set()
    for q in group.points():
        if not any(t[q] for t in tables):
            continue
        for j, table in enumerate(tables):
            bumped = dict(table)
            bumped[q] = (bumped[q] + 1) % p
            trial = list(tables)
            trial[j] = bumped
            if jacobian_at(trial, point, p) != base:
                chain.add(q)
                break
    return frozenset(chain)


def perturb_outside(group, chain, point, changes):
    """Group whose values differ from `group` at the given points, never on the chain or `point`."""
    p = group.p
    tables = _group_tables(group)
    for q, j, delta in changes:
        q = tuple(v % p for v in q)
        if q in chain or q == tuple(v % p for v in point):
            raise DomainError(f"{q} lies on the protected set")
        tables[j][q] = (tables[j][q] + delta) % p
    funcs = tuple(interpolate_multi(lambda pt, t=t: t[pt], p, group.nvars) for t in tables)
    return SquareGroup(p, funcs)


def complete_square_group(generators, n, p):
    """
    Extend generators with coordinate functions to an invertible square group.

    Returns (group, chosen coordinate indices).
    """
    k = len(generators)
    if k > n:
        raise DomainError("more generators than variables")
    for chosen in itertools.combinations(range(n), n - k):
        funcs = tuple(g.clean() for g in generators) + tuple(CleanPoly.variable(i, n, p) for i in chosen)
        group = SquareGroup(p, funcs)
        if independence_check(group):
            return group, chosen
    raise DomainError("generators do not extend to an invertible square group")


def subspace_reduce(s, generators):
    """
    Normal form of a span function in sub f_A: write x through the inverse of
    the completed square group and send the generator coordinates to 0.
    """
    n, p = s.n, s.p
    for g in generators:
        if g.nvars != n or g.prime != p:
            raise DomainError("generators must be clean functions of the originals")
    group, chosen = complete_square_group(generators, n, p)
    inverse = square_invert(group)
    k = len(generators)
    total = s.poly.nvars
    # s-coordinates: generators -> 0, kept coordinates -> the matching x variable
    s_images = [CleanPoly.zero(total, p)] * k + [CleanPoly.variable(i, total, p) for i in chosen]
    x_images = [embed(h, n).substitute(s_images).clean() for h in inverse.functions]
    images = x_images + [CleanPoly.variable(j, total, p) for j in range(n, total)]
    return SpanFn(s.poly.substitute(images).clean(), n, s.levels)


def zero_set(generators, n, p):
    return [pt for pt in itertools.product(range(p), repeat=n) if all(g.evaluate(pt) == 0 for g in generators)]


def tangent_directions(generators, point, p):
    """Directions d with sum_i (Dg/Dx_i)(point) d_i = 0 for every generator."""
    n = len(point)
    grads = [[clean_derivative(CalcFn(g), i).poly.evaluate(point) for i in range(n)] for g in generators]
    return [
        d for d in itertools.product(range(p), repeat=n)
        if all(sum(a * b for a, b in zip(grad, d)) % p == 0 for grad in grads)
    ]


def tensor_vanishes_in_subspace(components, generators, p):
    """A degree-1 tensor sum_i g_i Dx_i vanishes in sub f_A: zero on every tangent direction of V."""
    n = len(components)
    for pt in zero_set(generators, n, p):
        for d in tangent_directions(generators, pt, p):
            if sum(c.evaluate(pt) * di for c, di in zip(components, d)) % p:
                return False, (pt, d)
    return True, None


def span_vanishes_in_subspace(components, generators, p):
    """SC of a degree-1 tensor vanishes in sub f_A: sum_i g_i(x) Delta x_i = 0 whenever x, x + Delta x lie in V."""
    n = len(components)
    V = zero_set(generators, n, p)
    for x in V:
        for y in V:
            dx = tuple((b - a) % p for a, b in zip(x, y))
            if sum(c.evaluate(x) * d for c, d in zip(components, dx)) % p:
                return False, (x, dx)
    return True, None
