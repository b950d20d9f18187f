"""
Checkers for every registered claim.

Each checker takes (params, guards) and returns an Outcome or a ClaimReport.
Grids are scanned exhaustively while they fit guards.max_exhaustive and
sampled from the seeded generator otherwise.
"""
import itertools
import logging
from math import comb, factorial, gcd

import numpy as np
from sympy import Matrix
from sympy.ntheory import n_order, primitive_root

from src.modcalc.claims import Outcome, Verdict, register, subcheck_failed, verdict_failed
from src.modcalc.core_ring import DomainError, Modulus, NotRepresentableError, ValuedRational, valuation
from src.modcalc.digital import SquareGroup, resolve_digitwise, square_invert
from src.modcalc.dioph import DiophInstance, dioph_search, log_distinct_check, logs_collide
from src.modcalc.discrete_geometry import (
    FREEZING,
    Box,
    DiffForm,
    SpanFn,
    differential,
    geometry_derivation,
    operator_series_difference,
    perturb_outside,
    relative_chain,
    span_difference,
    span_vanishes_in_subspace,
    stokes_check,
    subspace_reduce,
    tensor_vanishes_in_subspace,
    zero_set,
)
from src.modcalc.fp_calculus import (
    CalcFn,
    box_difference,
    clean_derivative,
    hasse_derivative,
    integral_as_function,
    interval_integral,
    iterated_integral,
    kernel_I,
    modular_derivative_formal,
    summation_calculus,
    summation_calculus_multi,
)
from src.modcalc.gauss import rational_point_image, unit_circle
from src.modcalc.interp import CleanPoly, exp_table, interpolate_fn, local_expand, vandermonde_det
from src.modcalc.padic_analytic import (
    PrecisionContext,
    compute_E,
    even_series_exp,
    even_series_log,
    find_generator,
    lm_composite,
    lm_full,
    lm_principal,
    modulated_derivative,
    plm,
    plm_series,
    pow_E,
    pth_root_unit,
    sqrt_e,
)
from utils.lcg import Lcg

logger = logging.getLogger(__name__)

SAMPLES = 500


def _rng(guards, salt):
    return Lcg(guards.seed * 1000003 + salt)


def _tables(rng, p, length, guards, samples=SAMPLES):
    """All p^length tables when the scan fits the budget, else seeded samples."""
    if p ** length * length <= guards.max_exhaustive:
        return list(itertools.product(range(p), repeat=length)), True
    return [tuple(rng.below(p) for _ in range(length)) for _ in range(samples)], False


def _random_poly(rng, nvars, p, top=None):
    top = p - 1 if top is None else top
    exps = itertools.product(range(top + 1), repeat=nvars)
    return CleanPoly(nvars, p, p, {k: rng.below(p) for k in exps})


def _units(q):
    return [x for x in range(1, q) if gcd(x, q) == 1]


def _sample(rng, items, guards, samples=2000):
    if len(items) <= guards.max_exhaustive:
        return items
    return [rng.choice(items) for _ in range(samples)]


# interpolation and exponent tables

def _recheck_interpolation(params, witness):
    table = witness.get("table")
    if table is None:
        return vandermonde_det(params["p"]) == 0
    p = params["p"]
    poly = interpolate_fn(table)
    values = [sum(c * x ** e[0] for e, c in poly.coeffs.items()) % p for x in range(p)]
    return values != list(table)


@register("C1", "interpolation completeness and basis independence",
          "every map mod p is a polynomial of degree below p", {"p": 3},
          recheck=_recheck_interpolation, must_pass=verdict_failed)
def check_interpolation(params, guards):
    p = params["p"]
    det = vandermonde_det(p)
    if det == 0:
        return Outcome(False, {"vandermonde_det": 0})
    tables, exhaustive = _tables(_rng(guards, 1), p, p, guards)
    seen = set()
    for table in tables:
        poly = interpolate_fn(list(table))
        if tuple(poly.evaluate((x,)) for x in range(p)) != tuple(table):
            return Outcome(False, {"table": list(table)})
        seen.add(frozenset(poly.coeffs.items()))
    distinct = len(seen) == len(set(tables))
    notes = (f"{'all' if exhaustive else 'sampled'} {len(tables)} tables",)
    return Outcome(distinct, None if distinct else {"distinct": len(seen)}, notes,
                   {"basis_independence": True, "distinct_polynomials": distinct})


@register("C2", "exponent-table completeness",
          "every function of the exponent mod p-1 is a combination of e^(jx)", {"p": 3},
          must_pass=verdict_failed)
def check_exp_tables(params, guards):
    p = params["p"]
    if p == 2:
        return Outcome(None, notes=("mod 2 has a single unit",))
    e = int(primitive_root(p))
    table = exp_table(e, p)
    permutation = sorted(table) == list(range(1, p))
    n = p - 1
    M = Matrix(n, n, lambda x, j: pow(e, int(x) * int(j), p))
    if int(M.det()) % p == 0:
        return Outcome(False, {"e": e, "det": 0})
    Minv = M.inv_mod(p)
    inv = [[int(Minv[i, j]) for j in range(n)] for i in range(n)]
    functions, exhaustive = _tables(_rng(guards, 2), p, n, guards)
    for g in functions:
        c = [sum(inv[i][j] * g[j] for j in range(n)) % p for i in range(n)]
        recon = tuple(sum(c[j] * pow(e, x * j, p) for j in range(n)) % p for x in range(n))
        if recon != tuple(g):
            return Outcome(False, {"e": e, "function": list(g)})
    return Outcome(permutation, None if permutation else {"e": e, "table": table},
                   (f"generator e={e}", f"{'all' if exhaustive else 'sampled'} {len(functions)} functions"),
                   {"table_is_permutation": permutation})


# logarithms

@register("C3", "unit-group cyclicity", "units mod p^m form a cyclic group of order p^(m-1)(p-1)",
          {"p": 3, "m": 3}, must_pass=verdict_failed)
def check_cyclicity(params, guards):
    ctx = PrecisionContext(params["p"], params["m"])
    gp = find_generator(ctx)
    q, e = ctx.modulus, gp.e.rep
    order_ok = n_order(e, q) == ctx.group_order
    count_ok = len(_units(q)) == ctx.group_order
    if not (order_ok and count_ok):
        return Outcome(False, {"e": e, "order": int(n_order(e, q))}, subchecks={"order": order_ok})
    for x in _sample(_rng(guards, 3), _units(q), guards):
        try:
            rep = lm_full(x, gp).rep
        except DomainError:
            return Outcome(False, {"x": x, "e": e})
        if pow(e, rep, q) != x:
            return Outcome(False, {"x": x, "e": e, "lm": rep})
    return Outcome(True, None, (f"e={e}",), {"order": True, "roundtrip": True})


def _recheck_lm_minus_one(params, witness):
    p, m = params["p"], params["m"]
    q = p ** m
    e = witness["e"]
    k = next(k for k in range(q) if pow(e, k, q) == q - 1)
    return k != p ** (m - 1) * (p - 1) // 2


@register("C4", "lm(-1) value", "lm_e(-1) = p^(m-1)(p-1)/2", {"p": 3, "m": 2},
          recheck=_recheck_lm_minus_one, must_pass=verdict_failed)
def check_lm_minus_one(params, guards):
    p, m = params["p"], params["m"]
    gp = find_generator(PrecisionContext(p, m))
    expected = p ** (m - 1) * (p - 1) // 2
    got = lm_full(-1 % gp.ctx.modulus, gp).rep
    return Outcome(got == expected, None if got == expected else {"e": gp.e.rep, "lm": got, "expected": expected},
                   (f"lm(-1) = {got}",))


@register("C5", "E/e compatibility and logarithm base change", "E is nearly exp(p)", {"p": 3, "m": 2})
def check_base_change(params, guards):
    ctx = PrecisionContext(params["p"], params["m"])
    p, q = ctx.p, ctx.modulus
    gp = find_generator(ctx)
    E, e = gp.E.rep, gp.e.rep
    compat = pow(e, 1 - q, q) == E
    series = all(pow_E(x, ctx).rep == pow(E, x, q) for x in range(q))
    principal = [u for u in range(1, q, p)]
    roundtrip = all(pow_E(lm_principal(u, ctx).rep, ctx).rep == u for u in principal)
    base = all(
        lm_full(u, gp).rep == (1 - q) * lm_principal(u, ctx).rep % ctx.group_order
        for u in principal
    )
    deeper = ctx.with_terms(ctx.n_terms + 5)
    stable = (
        compute_E(deeper).rep == E
        and all(pow_E(x, deeper).rep == pow_E(x, ctx).rep for x in range(q))
        and all(lm_principal(u, deeper).rep == lm_principal(u, ctx).rep for u in principal)
    )
    ok = compat and series and roundtrip and base and stable
    witness = None
    if not ok:
        witness = {"e": e, "E": E}
    return Outcome(ok, witness, (f"e={e}, E={E}",),
                   {"compatibility": compat, "series_power_agreement": series,
                    "principal_roundtrip": roundtrip, "base_change": base,
                    "truncation_stable": stable})


def _legendre(n, p):
    total, pk = 0, p
    while pk <= n:
        total += n // pk
        pk *= p
    return total


def _recheck_growth(params, witness):
    p = params["p"]
    d = lambda k: k - valuation(factorial(k), p)  # noqa: E731
    return d(witness["m"]) <= d(p ** witness["n"])


@register("C6", "d_m valuation growth", "d_m > d_(p^n) for m > p^n", {"p": 3}, recheck=_recheck_growth)
def check_valuation_growth(params, guards):
    p = params["p"]

    def d(k):
        return k - _legendre(k, p)

    top = p ** 3
    for n in range(3):
        base = d(p ** n)
        for k in range(p ** n + 1, top + 1):
            if d(k) <= base:
                return Outcome(False, {"m": k, "n": n})
    return Outcome(True, notes=(f"checked m <= {top}",))


def _taylor_gap(coeffs, x, z, p, q):
    lhs = sum(c * (x + p * z) ** k for k, c in enumerate(coeffs))
    rhs = 0
    for i in range(len(coeffs)):
        hasse = sum(c * comb(k, i) * x ** (k - i) for k, c in enumerate(coeffs) if k >= i)
        rhs += p ** i * z ** i * hasse
    return (lhs - rhs) % q


@register("C7", "modulated Taylor identity",
          "f(x + zp) = sum p^i z^i f^(i)(x)/i! with divided-power derivatives",
          {"p": 3, "m": 3, "degree": 4}, must_pass=verdict_failed,
          recheck=lambda params, w: _taylor_gap(w["coeffs"], w["x"], w["z"], params["p"], params["p"] ** params["m"]) != 0)
def check_taylor(params, guards):
    p, m, degree = params["p"], params["m"], params["degree"]
    q = p ** m
    rng = _rng(guards, 7)
    if q * q <= guards.max_exhaustive:
        points = [(x, z) for x in range(q) for z in range(q)]
    else:
        points = [(rng.below(q), rng.below(q)) for _ in range(4096)]
    # D[k, j]: LHS - RHS for the monomial x^k at point j
    hasse = [
        [hasse_derivative(CleanPoly.univariate([0] * k + [1], p, q), i) for i in range(k + 1)]
        for k in range(degree + 1)
    ]
    D = np.array([
        [
            (pow(x + p * z, k, q) - sum(pow(p * z, i, q) * h.evaluate((x,)) for i, h in enumerate(hasse[k]))) % q
            for x, z in points
        ]
        for k in range(degree + 1)
    ], dtype=np.int64)
    top = p ** (m - 1)
    if top ** (degree + 1) <= guards.max_exhaustive:
        coeff_rows = list(itertools.product(range(top), repeat=degree + 1))
    else:
        coeff_rows = [tuple(rng.below(top) for _ in range(degree + 1)) for _ in range(2000)]
    for start in range(0, len(coeff_rows), 4096):
        chunk = np.array(coeff_rows[start:start + 4096], dtype=np.int64)
        gaps = np.tensordot(chunk, D, axes=([1], [0])) % q
        bad = np.argwhere(gaps)
        if len(bad):
            r, j = bad[0]
            x, z = points[int(j)]
            return Outcome(False, {"coeffs": list(coeff_rows[start + int(r)]), "x": x, "z": z})

    ctx = PrecisionContext(p, m, even_only=p == 2)
    derivative_ok = True
    for _ in range(20):
        coeffs = [rng.below(q) for _ in range(degree + 1)]
        formal = [(k * c) % q for k, c in enumerate(coeffs)][1:]
        while formal and formal[-1] == 0:
            formal.pop()
        if modulated_derivative(coeffs, ctx) != formal:
            derivative_ok = False
            break
    return Outcome(True, None, (f"{len(coeff_rows)} polynomials x {len(points)} points",),
                   {"difference_quotient_is_derivative": derivative_ok})


@register("C8", "(E^x)' = pE^x", "(E^x)' = pE^x read as a difference quotient", {"p": 3, "m": 2})
def check_exp_derivative(params, guards):
    p, m = params["p"], params["m"]
    q, Q = p ** m, p ** (2 * m)
    ctx2 = PrecisionContext(p, 2 * m)
    for x in range(q):
        diff = (pow_E(x + q, ctx2).rep - pow_E(x, ctx2).rep) % Q
        if diff % q or diff // q % q != p * pow_E(x, ctx2).rep % q:
            return Outcome(False, {"x": x})
    return Outcome(True, notes=(f"difference quotient taken at precision {2 * m}",))


@register("C9", "root-function derivative", "derivative of (1+x)^(1/p)", {"p": 3, "m": 2})
def check_root_derivative(params, guards):
    p, m = params["p"], params["m"]
    M = 2 * m + 4
    ctx = PrecisionContext(p, M)
    q, h = p ** m, p ** (m + 2)

    def root(x):
        return pth_root_unit(1 + x, ctx).rep

    for x in range(0, p ** (m + 2), p * p):
        num = (root(x + h) - root(x)) % p ** M
        if num % p ** (m + 1):
            return Outcome(False, {"x": x, "reason": "difference not divisible"})
        lhs = num // p ** (m + 1) % q
        rhs = root(x) * pow(1 + x, -1, q) % q
        if lhs != rhs:
            return Outcome(False, {"x": x, "lhs": lhs, "rhs": rhs})
    return Outcome(True, notes=(f"p * r'(x) = r(x)/(1+x) with step p^{m + 2} at precision {M}",))


def _plm_table(ctx):
    p, q = ctx.p, ctx.modulus
    return [0 if x % p == 0 else plm(x, ctx).rep for x in range(q)]


def _recheck_local(params, witness):
    ctx = PrecisionContext(params["p"], params["m"])
    try:
        local_expand(_plm_table(ctx), ctx.p, ctx.m)
    except NotRepresentableError:
        return True
    return False


@register("C10", "plm power-analyticity", "modulated plm is power-analytic", {"p": 3, "m": 2},
          recheck=_recheck_local, report_only=True)
def check_plm_analytic(params, guards):
    ctx = PrecisionContext(params["p"], params["m"])
    try:
        local_expand(_plm_table(ctx), ctx.p, ctx.m)
    except NotRepresentableError as e:
        return Outcome(False, {"x": e.witness}, ("plm set to 0 on multiples of p",))
    return Outcome(True, notes=("plm set to 0 on multiples of p",))


@register("C11", "composite logarithm", "complete logarithm on composite moduli", {"Q": 225})
def check_composite_log(params, guards):
    Q = params["Q"]
    if Q > guards.max_q:
        return Outcome(None, notes=(f"Q={Q} exceeds max_q",))
    modulus = Modulus.of(Q)
    rng = _rng(guards, 11)
    units = _units(Q)
    for x in _sample(rng, units, guards):
        if lm_composite(x, modulus).reconstruct().rep != x:
            return Outcome(False, {"x": x})
    hom = True
    for _ in range(200):
        a, b = rng.choice(units), rng.choice(units)
        la, lb, lab = (lm_composite(v, modulus) for v in (a, b, a * b % Q))
        for (_, _, x), (_, _, y), (_, _, z) in zip(la.components, lb.components, lab.components):
            if (x.rep + y.rep - z.rep) % x.order:
                hom = False
    minus_one = str(lm_composite(Q - 1, modulus))
    return Outcome(hom, None if hom else {"reason": "homomorphism"}, (f"lm(-1) = {minus_one}",),
                   {"roundtrip": True, "homomorphism": hom})


def _brute_sqrt(a, e, p):
    L = next(k for k in range(p - 1) if pow(e, k, p) == a % p)
    return pow(e, L // 2 if L % 2 == 0 else (L + p - 1) // 2, p)


def _recheck_sqrt_product(params, witness):
    p, a, e = params["p"], witness["a"], witness["e"]
    return _brute_sqrt(a, e, p) * _brute_sqrt(pow(a, -1, p), e, p) % p != p - 1


@register("C12", "square-root product", "a^(1/2) (1/a)^(1/2) = -1 mod p", {"p": 7},
          recheck=_recheck_sqrt_product, report_only=True)
def check_sqrt_product(params, guards):
    p = params["p"]
    gp = find_generator(PrecisionContext(p, 1))
    failures = []
    for a in range(1, p):
        s1, _ = sqrt_e(a, gp)
        s2, _ = sqrt_e(pow(a, -1, p), gp)
        if s1.rep * s2.rep % p != p - 1:
            failures.append(a)
    notes = ("odd-representative convention: odd L is halved as (L + p - 1)/2",
             f"failing a: {failures}")
    if failures:
        return Outcome(False, {"a": failures[0], "e": gp.e.rep}, notes)
    return Outcome(True, notes=notes)


@register("C13", "plm forms and derivative", "(x^(p^m(1-p^m)) - 1)/p^m and plm'(x) = 1/x", {"p": 3, "m": 2})
def check_plm(params, guards):
    p, m = params["p"], params["m"]
    ctx = PrecisionContext(p, m)
    q = ctx.modulus
    for x in _units(p ** (2 * m)):
        if plm(x, ctx).rep != plm_series(x, ctx).rep:
            return Outcome(False, {"x": x, "reading": "forms"})
    ctx2 = PrecisionContext(p, 2 * m)
    Q = ctx2.modulus
    for x in _units(q):
        diff = (plm(x + q, ctx2).rep - plm(x, ctx2).rep) % Q
        if diff % q or diff // q % q != pow(x, -1, q):
            return Outcome(False, {"x": x, "reading": "modulated"})
    # the clean derivative of the mod-p table, recorded only
    ctx1 = PrecisionContext(p, 1)
    table = [0 if x % p == 0 else plm(x, ctx1).rep for x in range(p)]
    deriv = clean_derivative(CalcFn.from_table(table))
    clean_ok = all(deriv(x) == pow(x, -1, p) for x in range(1, p))
    return Outcome(True, None, ("verdict covers the closed/series agreement and the modulated reading",
                                "the clean reading mod p is recorded as a subcheck"),
                   {"forms_agree": True, "modulated_reading": True, "clean_reading": clean_ok})


# Gaussian residues

@register("C14", "unit circle", "count p+1, z^p = z*, rational points cover the circle", {"p": 3})
def check_unit_circle(params, guards):
    p = params["p"]
    circle = unit_circle(p)
    order_ok = circle.order == p + 1
    image = rational_point_image(p)
    missing = set(circle.elements) - image
    ok = order_ok and circle.frobenius_ok and not missing
    witness = None
    if not ok:
        witness = {"order": circle.order,
                   "missing": sorted([z.re, z.im] for z in missing)}
    return Outcome(ok, witness, subchecks={"order": order_ok, "frobenius": circle.frobenius_ok,
                                           "surjective": not missing})


# digital

def _random_permutation(rng, items):
    items = list(items)
    for i in range(len(items) - 1, 0, -1):
        j = rng.below(i + 1)
        items[i], items[j] = items[j], items[i]
    return items


@register("C15", "square-group invertibility", "a one to one square group is invertible",
          {"p": 3, "n": 2, "count": 50}, must_pass=verdict_failed)
def check_square_groups(params, guards):
    p, n = params["p"], params["n"]
    rng = _rng(guards, 15)
    points = list(itertools.product(range(p), repeat=n))
    identity = SquareGroup.identity(p, n).table()
    for _ in range(params["count"]):
        images = _random_permutation(rng, points)
        g = SquareGroup.from_table(p, n, dict(zip(points, images)))
        h = square_invert(g)
        if g.compose(h).table() != identity or h.compose(g).table() != identity:
            return Outcome(False, {"images": [list(v) for v in images]})
    constant = SquareGroup(p, tuple(CleanPoly.constant(1, n, p) for _ in range(n)))
    try:
        square_invert(constant)
        rejected = False
    except DomainError:
        rejected = True
    return Outcome(rejected, None if rejected else {"group": "constant"},
                   subchecks={"two_sided_inverse": True, "non_bijective_rejected": rejected})


@register("C-iii", "local-expansion representability", "power-analytic functions have the branch form",
          {"p": 3, "m": 2, "count": 20})
def check_local_expansion(params, guards):
    p, m = params["p"], params["m"]
    q = p ** m
    rng = _rng(guards, 101)
    for _ in range(params["count"]):
        branches = [[rng.below(q) for _ in range(m)] for _ in range(p)]
        table = [sum(a * (x - x % p) ** k for k, a in enumerate(branches[x % p])) % q for x in range(q)]
        try:
            expansion = local_expand(table, p, m)
        except NotRepresentableError as e:
            return Outcome(False, {"branches": branches, "x": e.witness})
        if expansion.table() != table:
            return Outcome(False, {"branches": branches})
    return Outcome(True, notes=(f"{params['count']} seeded branch functions",))


@register("C-dig", "digitwise representability", "any map mod p^m resolves digit by digit",
          {"p": 3, "m": 2, "count": 10})
def check_digitwise(params, guards):
    p, m = params["p"], params["m"]
    q = p ** m
    rng = _rng(guards, 102)
    for _ in range(params["count"]):
        table = [rng.below(q) for _ in range(q)]
        try:
            resolution = resolve_digitwise(table, p, m)
        except NotRepresentableError as e:
            return Outcome(False, {"table": table, "x": e.witness})
        if any(resolution.evaluate(x) != table[x] for x in range(q)):
            return Outcome(False, {"table": table})
    return Outcome(True, notes=(f"{params['count']} seeded maps",))


# integration kernel and summation calculus

def _kernel_counts(p):
    kern = kernel_I(p)
    rows = []
    for C in range(1, p):
        values = [kern.value(t, C) for t in range(p)]
        rows.append((C, len(set(values)), values.count(0), values))
    return rows


@register("C16", "I^t value and zero counts", "t -> I^t(C) takes p-1 distinct values and two zeros", {"p": 3},
          must_pass=lambda r: r.params.get("p") == 3 and r.verdict == Verdict.FAIL,
          recheck=lambda params, w: w["distinct"] != params["p"] - 1 or w["zeros"] != 2)
def check_kernel_counts(params, guards):
    p = params["p"]
    notes = ["t = 0 is included in the zero count"]
    for C, distinct, zeros, values in _kernel_counts(p):
        notes.append(f"C={C}: values {values}")
        if distinct != p - 1 or zeros != 2:
            return Outcome(False, {"C": C, "distinct": distinct, "zeros": zeros}, tuple(notes))
    return Outcome(True, notes=tuple(notes))


@register("C17", "I^t(x) != -t and antisymmetry", "I^t(x) = -I^x(t)", {"p": 3},
          must_pass=subcheck_failed("antisymmetry"))
def check_kernel_symmetry(params, guards):
    p = params["p"]
    kern = kernel_I(p)
    antisymmetric = all((kern.value(t, x) + kern.value(x, t)) % p == 0 for t in range(p) for x in range(p))
    hit = next(((t, x) for t in range(1, p) for x in range(p) if kern.value(t, x) == -t % p), None)
    ok = antisymmetric and hit is None
    witness = None
    if not ok:
        witness = {"t": hit[0], "x": hit[1]} if hit else {"antisymmetry": False}
    return Outcome(ok, witness, subchecks={"antisymmetry": antisymmetric, "never_minus_t": hit is None})


def _delta_fn(p):
    return CalcFn.from_table([1] + [0] * (p - 1))


@register("C18", "integral of delta and track dependence", "the integral of delta depends on the track", {"p": 3})
def check_delta_integral(params, guards):
    p = params["p"]
    tables = summation_calculus(_delta_fn(p))
    for x in range(p):
        closed = (-(x ** p - x) // p) % p
        if tables.f_delta[x] != closed:
            return Outcome(False, {"x": x, "f_delta": tables.f_delta[x], "closed": closed})
    functions, _ = _tables(_rng(guards, 18), p, p, guards)
    translation = True
    injective = True
    for table in functions:
        f = CalcFn.from_table(list(table))
        fi = summation_calculus(f).f_I
        if (not any(fi)) != (not any(table)):
            injective = False
        for C in range(1, p):
            if any(interval_integral(f, 0, x, shift=C) != interval_integral(f, 0, x) for x in range(p)):
                translation = False
    return Outcome(True, None, ("track 0..p-1", "f_Delta(0) = 0"),
                   {"closed_form": True, "track_dependent": tables.wraps,
                    "translation_invariance": translation, "f_Dx_zero_iff_f_zero": injective})


def _reduced_functions(p, guards, salt):
    rng = _rng(guards, salt)
    coeff_rows, _ = _tables(rng, p, p - 1, guards)
    return [CalcFn.of(list(c), p) for c in coeff_rows]


@register("C19", "modular derivation inverts integration", "inverse of the modular integration", {"p": 3},
          report_only=True)
def check_derivation_inverse(params, guards):
    p = params["p"]
    integrate_then_derive = True
    derive_then_integrate = True
    witness = None
    for f in _reduced_functions(p, guards, 19):
        table = f.table()
        back = modular_derivative_formal(integral_as_function(f))
        if back.table() != table:
            integrate_then_derive = False
            witness = witness or {"order": "integrate then derive", "f": table}
        g = modular_derivative_formal(f)
        if g.reduced:
            F = integral_as_function(g)
            if F.table() != [(v - table[0]) % p for v in table]:
                derive_then_integrate = False
                witness = witness or {"order": "derive then integrate", "f": table}
    fundamental = all(
        clean_derivative(integral_as_function(f)).table() == f.table()
        for f in _reduced_functions(p, guards, 190) if f.poly.degree() <= p - 3
    )
    ok = integrate_then_derive and derive_then_integrate
    return Outcome(ok, witness, ("t = 0 excluded from the formal derivation sum",),
                   {"integrate_then_derive": integrate_then_derive,
                    "derive_then_integrate": derive_then_integrate,
                    "clean_fundamental_theorem": fundamental})


@register("C20", "multi-variable fundamental theorem", "iterated integral against box differences of f^Delta",
          {"p": 3, "n": 2, "count": 5}, report_only=True)
def check_multi_fundamental(params, guards):
    p, n = params["p"], params["n"]
    rng = _rng(guards, 20)
    intervals = [(a, b) for a in range(p) for b in range(a + 1, p)]
    for _ in range(params["count"]):
        f = CalcFn(_random_poly(rng, n, p))
        tables = summation_calculus_multi(f)
        for bounds in itertools.product(intervals, repeat=n):
            lhs = iterated_integral(f, bounds)
            rhs = box_difference(tables.f_delta, bounds, p)
            if lhs != rhs:
                return Outcome(False, {"f": str(f.poly), "bounds": [list(b) for b in bounds],
                                       "integral": lhs, "difference": rhs})
    return Outcome(True, notes=("f^Delta built on the diagonal with zero boundary",))


# discrete geometry

@register("C21", "discrete Stokes", "boundary integral equals the area integral of the wedge derivative",
          {"p": 3, "count": 5}, report_only=True)
def check_stokes(params, guards):
    p = params["p"]
    rng = _rng(guards, 21)
    boxes = [Box(((a, b), (c, d))) for a in range(p) for b in range(a + 1, p)
             for c in range(p) for d in range(c + 1, p)]
    for _ in range(params["count"]):
        form = DiffForm(1, 2, p, {(0,): _random_poly(rng, 2, p), (1,): _random_poly(rng, 2, p)})
        for box in boxes:
            report = stokes_check(form, box)
            if report.verdict == Verdict.FAIL:
                witness = dict(report.witness)
                witness["box"] = [list(iv) for iv in box.intervals]
                return Outcome(False, witness, (FREEZING,))
    return Outcome(True, notes=(FREEZING,))


def _span_tables_equal(a, b, p):
    for pt in itertools.product(range(p), repeat=a.poly.nvars):
        if a.poly.evaluate(pt) != b.poly.evaluate(pt):
            return False, list(pt)
    return True, None


@register("C22", "difference-operator series", "the difference as a series in Delta x D/Dx",
          {"p": 3, "n": 2, "count": 10}, report_only=True)
def check_operator_series(params, guards):
    p, n = params["p"], params["n"]
    rng = _rng(guards, 22)
    hasse_ok = True
    witness = None
    for _ in range(params["count"]):
        f = SpanFn.of(_random_poly(rng, n, p), n)
        direct = span_difference(f)
        same, pt = _span_tables_equal(direct, operator_series_difference(f, "hasse"), p)
        hasse_ok = hasse_ok and same
        same, pt = _span_tables_equal(direct, operator_series_difference(f, "iterated"), p)
        if not same and witness is None:
            witness = {"f": str(f.poly), "point": pt}
    return Outcome(witness is None, witness,
                   ("verdict uses iterated clean derivatives; the divided-power reading is a subcheck",),
                   {"divided_power_reading": hasse_ok, "iterated_clean_reading": witness is None})


@register("C23", "product rule", "Delta(fg) = g Delta f + f Delta g + Delta f Delta g",
          {"p": 3, "n": 2, "count": 10})
def check_product_rule(params, guards):
    p, n = params["p"], params["n"]
    rng = _rng(guards, 23)
    for _ in range(params["count"]):
        f, g = _random_poly(rng, n, p), _random_poly(rng, n, p)
        lhs = span_difference(SpanFn.of((f * g).clean(), n))
        df, dg = span_difference(SpanFn.of(f, n)), span_difference(SpanFn.of(g, n))
        F, G = SpanFn.of(f, n, 1), SpanFn.of(g, n, 1)
        rhs = G * df + F * dg + df * dg
        if lhs.poly != rhs.poly:
            return Outcome(False, {"f": str(f), "g": str(g)})
    return Outcome(True)


def _graph_generator(rng, p):
    """x0 + c(x1): always completes to a square group with x1."""
    c = {(0, k): rng.below(p) for k in range(p)}
    return CleanPoly(2, p, p, c) + CleanPoly.variable(0, 2, p)


@register("C24", "difference vanishing in a subspace", "F = 0 implies Delta F = 0 in sub f_A",
          {"p": 3, "count": 10})
def check_subspace_difference(params, guards):
    p = params["p"]
    rng = _rng(guards, 24)
    for _ in range(params["count"]):
        g = _graph_generator(rng, p)
        F = (g * _random_poly(rng, 2, p)).clean()
        reduced = subspace_reduce(SpanFn.of(F, 2), [g])
        if not reduced.is_zero():
            return Outcome(False, {"generator": str(g), "F": str(F), "reading": "normal form"})
        dF = span_difference(SpanFn.of(F, 2))
        V = zero_set([g], 2, p)
        for x in V:
            for y in V:
                dx = tuple((b - a) % p for a, b in zip(x, y))
                if dF.evaluate(x, [dx]):
                    return Outcome(False, {"generator": str(g), "F": str(F), "x": list(x), "dx": list(dx)})
    return Outcome(True)


def _form_components(form, n, p):
    return [form.components.get((i,), CleanPoly.zero(n, p)) for i in range(n)]


@register("C25", "SC equivalence", "G = 0 iff SC(G) = 0 in sub f_A", {"p": 3, "count": 20}, report_only=True)
def check_sc_equivalence(params, guards):
    p = params["p"]
    rng = _rng(guards, 25)
    agree = disagree = 0
    witness = None
    for i in range(params["count"]):
        g = _graph_generator(rng, p)
        if i % 2:
            F = (g * _random_poly(rng, 2, p)).clean()
            comps = _form_components(differential(CalcFn(F)), 2, p)
        else:
            comps = [_random_poly(rng, 2, p), _random_poly(rng, 2, p)]
        tangent, _ = tensor_vanishes_in_subspace(comps, [g], p)
        span, _ = span_vanishes_in_subspace(comps, [g], p)
        if tangent == span:
            agree += 1
        else:
            disagree += 1
            witness = witness or {"generator": str(g), "components": [str(c) for c in comps],
                                  "tensor_zero": tangent, "span_zero": span}
    return Outcome(witness is None, witness, (f"{agree} agree, {disagree} disagree",))


@register("C26", "Dg = 0 gives g constant in a subspace", "g(.., x_i, ..) = C", {"p": 3, "count": 20})
def check_constant_in_subspace(params, guards):
    p = params["p"]
    rng = _rng(guards, 26)
    vanished = 0
    for i in range(params["count"]):
        gen = _graph_generator(rng, p)
        if i % 2:
            g = (CleanPoly.constant(rng.below(p), 2, p) + gen * _random_poly(rng, 2, p)).clean()
        else:
            g = _random_poly(rng, 2, p)
        comps = _form_components(differential(CalcFn(g)), 2, p)
        zero, _ = tensor_vanishes_in_subspace(comps, [gen], p)
        if not zero:
            continue
        vanished += 1
        values = {g.evaluate(x) for x in zero_set([gen], 2, p)}
        if len(values) > 1:
            return Outcome(False, {"generator": str(gen), "g": str(g), "values": sorted(values)})
    return Outcome(True, notes=(f"Dg vanished in {vanished} of {params['count']} cases",))


@register("C27", "relative-chain invariance", "clean geometry derivations are unchanged off the relative chain",
          {"p": 3, "count": 20}, report_only=True)
def check_relative_chain(params, guards):
    p = params["p"]
    rng = _rng(guards, 27)
    points = list(itertools.product(range(p), repeat=2))
    for _ in range(params["count"]):
        group = SquareGroup(p, (_random_poly(rng, 2, p), _random_poly(rng, 2, p)))
        P = rng.choice(points)
        chain = relative_chain(group, P)
        outside = [q for q in points if q not in chain and q != P]
        if not outside:
            continue
        q = rng.choice(outside)
        changed = perturb_outside(group, chain, P, [(q, rng.below(2), 1 + rng.below(p - 1))])
        before, after = geometry_derivation(group, P), geometry_derivation(changed, P)
        if before != after:
            return Outcome(False, {"point": list(P), "perturbed": list(q), "before": before, "after": after,
                                   "chain": sorted(list(c) for c in chain)})
    return Outcome(True, notes=("chain = perturbation-sensitive points carrying a nonzero value",))


# logarithm distinctness and the Diophantine window

def _recheck_collision(params, witness):
    return logs_collide(witness["a"], witness["b"], witness["modulus"])


@register("C28", "logarithm distinctness mod q^2", "0 < b < a < q/P^3(q) gives lm(a) != lm(b) mod q^2",
          {"q": 3 ** 11}, recheck=_recheck_collision, report_only=True)
def check_log_distinct(params, guards):
    return log_distinct_check(params["q"], guards.budget, guards.seed, "q2")


@register("C29", "logarithm distinctness mod q^4/P^5(q)", "lm(a) != lm(b) mod q^4/P^5(q)",
          {"q": 3 ** 11}, recheck=_recheck_collision, report_only=True)
def check_log_distinct_q4(params, guards):
    return log_distinct_check(params["q"], guards.budget, guards.seed, "q4")


@register("C30", "final-theorem desk search", "a^p + b^p = c^q has no solution for p, q >= 41",
          {"a_max": 30, "p_set": [41, 43], "q_min": 41, "q_max": 50},
          recheck=lambda params, w: DiophInstance(**w).holds() and DiophInstance(**w).strict,
          must_pass=subcheck_failed("relaxed_detection"))
def check_desk_search(params, guards):
    n = params["a_max"]
    q_set = range(params["q_min"], params["q_max"] + 1)
    rows = dioph_search(n, n, n, params["p_set"], q_set, strict=True, max_power_bits=guards.max_power_bits)
    unfiltered = dioph_search(n, n, n, params["p_set"], q_set, strict=True, use_filters=False,
                              max_power_bits=guards.max_power_bits)
    relaxed = dioph_search(10, 10, 10, [3], [2])
    detected = [r.as_row() for r in relaxed] == [{"a": 1, "b": 2, "c": 3, "p": 3, "q": 2}]
    notes = ("not a verification: a counterexample search in a finite window only",)
    subchecks = {"relaxed_detection": detected, "filter_soundness": rows == unfiltered}
    if rows:
        return Outcome(False, rows[0].as_row(), notes, subchecks)
    return Outcome(True, None, notes, subchecks)


# p = 2 even-argument variants

@register("C-bb2", "even-argument exponential and logarithm for p = 2", "valid for p = 2 when 2 | x", {"m": 6})
def check_even_series(params, guards):
    m = params["m"]
    ctx = PrecisionContext(2, m, even_only=True)
    q = ctx.modulus
    evens = range(0, q, 2)
    for x in evens:
        for y in evens:
            lhs = even_series_exp(x, ctx).rep * even_series_exp(y, ctx).rep % q
            if lhs != even_series_exp((x + y) % q, ctx).rep:
                return Outcome(False, {"x": x, "y": y, "reading": "homomorphism"})
    target = 2 ** (m - 1)
    for x in evens:
        if even_series_log(even_series_exp(x, ctx).rep, ctx).rep != x % target:
            return Outcome(False, {"x": x, "reading": "log inverts exp"})
    return Outcome(True, subchecks={"homomorphism": True, "log_inverts_exp": True})


@register("C-ccc2", "even-argument Taylor identity for p = 2", "valid for p = 2 when 2 | z",
          {"m": 4, "degree": 4, "count": 50})
def check_even_taylor(params, guards):
    m, degree = params["m"], params["degree"]
    q = 2 ** m
    rng = _rng(guards, 202)
    weights = [(ValuedRational.of(2 ** i, 2) / factorial(i)).reduce(q) for i in range(degree + 1)]
    for _ in range(params["count"]):
        coeffs = [rng.below(q) for _ in range(degree + 1)]
        for x in range(q):
            for z in range(0, q, 2):
                lhs = sum(c * (x + 2 * z) ** k for k, c in enumerate(coeffs)) % q
                rhs = 0
                for i in range(degree + 1):
                    deriv = sum(c * factorial(k) // factorial(k - i) * x ** (k - i)
                                for k, c in enumerate(coeffs) if k >= i)
                    rhs += weights[i] * z ** i * deriv
                if lhs != rhs % q:
                    return Outcome(False, {"coeffs": coeffs, "x": x, "z": z})
    return Outcome(True, notes=("2^i/i! reduced exactly; ordinary derivatives",))
