import itertools
import random

import pytest

from src.modcalc.core_ring import DomainError
from src.modcalc.fp_calculus import (
    CalcFn,
    area_integral,
    box_difference,
    clean_derivative,
    clean_derivative_kernel,
    definite_integral,
    dt_kernel,
    dt_pairing,
    f_I,
    hasse_derivative,
    integral_as_function,
    interval_integral,
    iterated_integral,
    kernel_I,
    ladder_orders,
    modular_derivative_formal,
    multi_from_table,
    summation_calculus,
    summation_calculus_multi,
)
from src.modcalc.interp import CleanPoly


def _monomial(k, p):
    return CalcFn.of([0] * k + [1], p)


def test_kernel_rows_at_3():
    kern = kernel_I(3)
    assert kern.table[0] == (0, 0, 0)
    assert kern.table[1] == (0, 0, 1)
    assert kern.table[2] == (0, 2, 0)
    assert kern.two_point(2, 1, 1) == 2


def test_kernel_needs_odd_prime():
    with pytest.raises(DomainError):
        kernel_I(2)


def test_dt_kernel_at_3_reads_next_point():
    assert [dt_kernel(3, t) for t in range(3)] == [(0, 1, 0), (0, 0, 1), (1, 0, 0)]
    f = CalcFn.from_table([2, 0, 1])
    assert [dt_pairing(f, t) for t in range(3)] == [0, 1, 2]


def test_ladder_orders():
    assert ladder_orders(3, 1) == [1, 3, 5]


def test_hasse_derivative():
    x4 = CleanPoly.univariate([0, 0, 0, 0, 1], 5)
    assert hasse_derivative(x4, 2).coeffs == {(2,): 1}
    assert hasse_derivative(x4, 5).is_zero()


def test_derivative_flavours_agree_on_every_f_mod_3():
    for coeffs in itertools.product(range(3), repeat=3):
        f = CalcFn.of(list(coeffs), 3)
        expected = clean_derivative(f)
        assert clean_derivative_kernel(f) == expected
        assert modular_derivative_formal(f) == expected


@pytest.mark.parametrize("p", [5, 7])
def test_derivative_flavours_agree_on_random_f(p):
    rng = random.Random(11 + p)
    for i in range(2000):
        f = CalcFn.of([rng.randrange(p) for _ in range(p)], p)
        expected = clean_derivative(f)
        assert clean_derivative_kernel(f) == expected
        if i < 200:
            assert modular_derivative_formal(f) == expected


def test_cube_derivative_mod_3():
    # x^3 is x as a function mod 3
    assert clean_derivative(_monomial(3, 3)).poly.coeffs == {(0,): 1}


def test_derivative_of_top_degree_monomial():
    # x^(p-1) -> (p-1) x^(p-2), the ordinary derivative
    f = _monomial(4, 5)
    assert clean_derivative(f).poly.coeffs == {(3,): 4}


def test_integral_of_monomials():
    for p in (3, 5, 7):
        for k in range(p - 1):
            integral = integral_as_function(_monomial(k, p))
            inv = pow(k + 1, -1, p)
            assert integral.table() == [pow(t, k + 1, p) * inv % p for t in range(p)]


def test_fundamental_theorem_on_reduced_functions():
    rng = random.Random(5)
    for p in (3, 5, 7):
        for _ in range(5):
            f = CalcFn.of([rng.randrange(p) for _ in range(p - 1)], p)
            assert clean_derivative(integral_as_function(f)).table() == f.table()


def test_definite_integral_needs_reduced_function():
    with pytest.raises(DomainError):
        definite_integral(_monomial(2, 3), 1)
    assert definite_integral(CalcFn.of([1], 3), 2) == 2


def test_summation_calculus_of_delta():
    tables = summation_calculus(CalcFn.from_table([1, 0, 0]))
    assert tables.f_I == (0, 0, 1)
    assert tables.f_sigma == (0, 0, 1)
    assert tables.f_delta == (0, 0, 1)
    assert tables.wraps
    assert tables.track == "0..p-1"


def test_interval_integral_at_3():
    delta = CalcFn.from_table([1, 0, 0])
    assert interval_integral(delta, 0, 2) == 1
    assert interval_integral(delta, 0, 1) == 0
    assert iterated_integral(delta, [(0, 2)]) == 1
    assert area_integral(delta, [(1,), (2,)]) == 1


def test_multi_summation_diagonal_recurrence():
    p = 3
    f = multi_from_table({(x, y): (x + 2 * y + x * y) % p for x in range(p) for y in range(p)}, p, 2)
    tables = summation_calculus_multi(f)
    for pt, value in tables.f_delta.items():
        if min(pt) == 0:
            assert value == 0
        else:
            prev = tuple(c - 1 for c in pt)
            assert (value - tables.f_delta[prev]) % p == tables.f_I[pt]
    assert tables.f_sigma[(0, 0)] == tables.f_I[(0, 0)]


def test_f_I_matches_univariate_pairing():
    f = CalcFn.of([1, 2, 3, 4], 5)
    assert all(f_I(f, (t,)) == dt_pairing(f, t) for t in range(5))


def test_box_difference():
    table = {(x, y): x * y % 5 for x in range(5) for y in range(5)}
    assert box_difference(table, [(0, 2), (1, 3)], 5) == 4


def test_calc_fn_table_is_univariate():
    f = multi_from_table({(x, y): x for x in range(3) for y in range(3)}, 3, 2)
    assert f(2, 1) == 2
    with pytest.raises(DomainError):
        f.table()
