import random

import pytest

from src.modcalc.claims import Verdict
from src.modcalc.core_ring import DomainError
from src.modcalc.digital import SquareGroup
from src.modcalc.discrete_geometry import (
    Box,
    DiffForm,
    SpanFn,
    boundary,
    complete_square_group,
    differential,
    geometry_derivation,
    ld_extract,
    line_integral,
    operator_series_difference,
    partial_at,
    perturb_outside,
    relative_chain,
    span_correspondence,
    span_difference,
    span_vanishes_in_subspace,
    staircase_path,
    stokes_check,
    subspace_reduce,
    tangent_directions,
    tensor_correspondence,
    tensor_vanishes_in_subspace,
    wedge_derivative,
)
from src.modcalc.fp_calculus import CalcFn, clean_derivative
from src.modcalc.interp import CleanPoly


def _x(i, n, p):
    return CleanPoly.variable(i, n, p)


def _random_poly(rng, nvars, p):
    coeffs = {}
    for _ in range(6):
        exps = tuple(rng.randrange(p) for _ in range(nvars))
        coeffs[exps] = rng.randrange(p)
    return CleanPoly(nvars, p, p, coeffs)


def test_box_shape():
    box = Box(((0, 2), (1, 1), (0, 3)))
    assert box.dim == 3
    assert box.axes == [0, 2]
    assert box.order == 2
    assert box.face(0, True).intervals == ((2, 2), (1, 1), (0, 3))
    assert box.wraps(3) and not box.wraps(5)
    with pytest.raises(DomainError):
        Box(((2, 0),))


def test_boundary_of_boundary_vanishes():
    square = Box(((0, 2), (0, 3)))
    edges = boundary(square)
    assert edges == {
        Box(((2, 2), (0, 3))): 1,
        Box(((0, 0), (0, 3))): -1,
        Box(((0, 2), (3, 3))): -1,
        Box(((0, 2), (0, 0))): 1,
    }
    assert boundary(edges) == {}
    assert boundary(Box(((0, 1), (0, 1), (0, 1))))  # nonempty
    assert boundary(boundary(Box(((0, 1), (0, 2), (1, 3))))) == {}


def test_staircase_path_freezes_earlier_coordinates_at_end():
    assert staircase_path((0, 0), (2, 3)) == {
        Box(((0, 2), (0, 0))): 1,
        Box(((2, 2), (0, 3))): 1,
    }
    assert staircase_path((2, 1), (0, 1)) == {Box(((0, 2), (1, 1))): -1}


def test_diff_form_normalises_indices():
    x = _x(0, 2, 3)
    form = DiffForm(2, 2, 3, {(1, 0): x, (0, 0): x})
    assert list(form.components) == [(0, 1)]
    assert form.components[(0, 1)] == x * -1
    assert DiffForm(2, 2, 3, {(0, 1): x, (1, 0): x}).is_zero()
    with pytest.raises(DomainError):
        DiffForm(1, 2, 3, {(0, 1): x})


def test_wedge_derivative_of_differential_vanishes():
    rng = random.Random(3)
    for p in (3, 5):
        for _ in range(5):
            f = CalcFn(_random_poly(rng, 2, p))
            assert wedge_derivative(differential(f)).is_zero()


def test_wedge_derivative_needs_antisymmetric_form():
    form = DiffForm(1, 2, 3, {(0,): _x(1, 2, 3)}, antisymmetric=False)
    with pytest.raises(DomainError):
        wedge_derivative(form)


def test_wedge_derivative_of_simple_form():
    # D^(x Dy) = Dx ∧ Dy
    form = DiffForm(1, 2, 5, {(1,): _x(0, 2, 5)})
    assert wedge_derivative(form).components == {(0, 1): CleanPoly.constant(1, 2, 5)}


def test_line_integral_of_constant_form():
    form = DiffForm(1, 1, 3, {(0,): CleanPoly.constant(1, 1, 3)})
    assert line_integral(form, {Box(((0, 2),)): 1}) == 2
    assert line_integral(form, {Box(((0, 2),)): -1}) == 1
    with pytest.raises(DomainError):
        line_integral(DiffForm(2, 2, 3), {})


def test_stokes_check_report_shape():
    form = DiffForm(1, 2, 3, {(1,): _x(0, 2, 3)})
    report = stokes_check(form, Box(((0, 1), (0, 2))))
    assert report.id == "C21"
    assert report.verdict in (Verdict.PASS, Verdict.FAIL)
    assert report.params == {"p": 3, "box": [[0, 1], [0, 2]]}
    with pytest.raises(DomainError):
        stokes_check(form, Box(((0, 1), (0, 0))))


def test_span_difference_of_square():
    s = SpanFn.of(_x(0, 1, 5) ** 2, 1)
    ds = span_difference(s)
    assert ds.levels == 1
    assert ds.poly.coeffs == {(1, 1): 2, (0, 2): 1}
    assert ld_extract(ds).poly.coeffs == {(1, 1): 2}
    assert ds.evaluate((3,), ((2,),)) == (25 - 9) % 5


def test_operator_series_matches_direct_difference():
    rng = random.Random(17)
    for p in (3, 5):
        for _ in range(4):
            s = SpanFn.of(_random_poly(rng, 2, p), 2)
            assert operator_series_difference(s, "hasse") == span_difference(s)


def test_span_product_rule():
    rng = random.Random(23)
    p = 3
    for _ in range(4):
        f = SpanFn.of(_random_poly(rng, 2, p), 2)
        g = SpanFn.of(_random_poly(rng, 2, p), 2)
        df, dg = span_difference(f), span_difference(g)
        lift = lambda s: SpanFn.of(s.poly, 2, 1)  # noqa: E731
        assert span_difference(f * g) == lift(g) * df + lift(f) * dg + df * dg


def test_tensor_and_span_correspondence_roundtrip():
    s = span_difference(SpanFn.of(_x(0, 2, 3) * _x(1, 2, 3), 2))
    t = tensor_correspondence(s)
    assert span_correspondence(t) == s
    assert "D1x0" in str(t) and "D1x1" in str(t)


def test_partial_at_matches_clean_derivative():
    rng = random.Random(1)
    p = 5
    poly = _random_poly(rng, 2, p)
    values = poly.table()
    for axis in (0, 1):
        derivative = clean_derivative(CalcFn(poly), axis).poly
        for pt in values:
            assert partial_at(values, pt, axis, p) == derivative.evaluate(pt)


def test_geometry_derivation_of_shear():
    p = 3
    x, y = _x(0, 2, p), _x(1, 2, p)
    group = SquareGroup(p, (x + 1, x + y))
    assert all(geometry_derivation(group, pt) == 1 for pt in group.points())
    assert geometry_derivation(SquareGroup.identity(5, 2), (2, 3)) == 1


def test_perturbation_off_the_axis_lines_keeps_the_derivation():
    p = 3
    x, y = _x(0, 2, p), _x(1, 2, p)
    group = SquareGroup(p, (x * y + x, y + 1))
    point = (0, 0)
    chain = relative_chain(group, point)
    assert (1, 1) not in chain and (2, 2) not in chain
    perturbed = perturb_outside(group, chain, point, [((1, 1), 0, 1), ((2, 2), 1, 2)])
    assert perturbed.evaluate((1, 1)) != group.evaluate((1, 1))
    assert geometry_derivation(perturbed, point) == geometry_derivation(group, point)
    with pytest.raises(DomainError):
        perturb_outside(group, chain, point, [(point, 0, 1)])


def test_complete_square_group_and_subspace_reduce():
    p = 3
    x0, x1 = _x(0, 2, p), _x(1, 2, p)
    group, chosen = complete_square_group([x0 + x1], 2, p)
    assert chosen == (0,)
    assert group.image_size() == 9
    assert subspace_reduce(SpanFn.of(x0 + x1, 2), [x0 + x1]).is_zero()
    assert not subspace_reduce(SpanFn.of(x0, 2), [x0 + x1]).is_zero()


def test_vanishing_in_subspace():
    p = 3
    x0 = _x(0, 2, p)
    one, zero = CleanPoly.constant(1, 2, p), CleanPoly.zero(2, p)
    assert (0, 1) in tangent_directions([x0], (0, 0), p)
    assert tensor_vanishes_in_subspace([one, zero], [x0], p) == (True, None)
    ok, witness = tensor_vanishes_in_subspace([zero, one], [x0], p)
    assert not ok and witness == ((0, 0), (0, 1))
    assert span_vanishes_in_subspace([one, zero], [x0], p) == (True, None)
    assert not span_vanishes_in_subspace([zero, one], [x0], p)[0]
