import pytest

from src.modcalc.core_ring import DomainError, centered_rep
from src.modcalc.digital import (
    SquareGroup,
    decode_digit,
    digit,
    digits,
    encode_digit,
    independence_check,
    resolve_digitwise,
    shifted_digit,
    square_invert,
)
from src.modcalc.interp import CleanPoly


def test_centered_digits():
    vector = digits(7, 3, 3)
    assert vector.digits == (1, -1, 1)
    assert vector.value == 7
    assert len(vector) == 3


def test_digits_rebuild_centered_value():
    for x in range(-40, 41):
        assert digits(x, 3, 3).value == centered_rep(x, 27)
        assert all(abs(d) <= 1 for d in digits(x, 3, 3).digits)


def test_digit_guards():
    with pytest.raises(DomainError):
        digit(5, 3, 0)
    with pytest.raises(DomainError):
        digits(5, 1, 2)


def test_shifted_digit():
    assert shifted_digit(7, 3, 3) == -1


def test_encode_decode():
    for d in (-2, -1, 0, 1, 2):
        assert 0 <= encode_digit(d, 5) < 5
        assert decode_digit(encode_digit(d, 5), 5) == d


def test_resolve_digitwise_square():
    resolution = resolve_digitwise(lambda x: x * x, 3, 2)
    assert len(resolution.polys) == 2
    assert all(resolution.evaluate(x) == x * x % 9 for x in range(9))


def test_resolve_digitwise_from_table():
    table = [(5 * x + 2) % 25 for x in range(25)]
    resolution = resolve_digitwise(table, 5, 2)
    assert [resolution.evaluate(x) for x in range(25)] == table


def test_resolve_digitwise_needs_odd_prime():
    with pytest.raises(DomainError):
        resolve_digitwise(lambda x: x, 2, 2)


def _shear():
    table = {(x, y): ((x + 1) % 3, (x + y) % 3) for x in range(3) for y in range(3)}
    return SquareGroup.from_table(3, 2, table), table


def test_square_group_identity():
    g = SquareGroup.identity(5, 2)
    assert g.independent
    assert g.image_size() == 25
    assert independence_check(g)


def test_square_invert_composes_to_identity():
    g, table = _shear()
    assert g.table() == table
    h = square_invert(g)
    assert h.independent
    assert g.compose(h).table() == SquareGroup.identity(3, 2).table()
    assert h.compose(g).table() == SquareGroup.identity(3, 2).table()


def test_dependent_group_has_no_inverse():
    g = SquareGroup(3, (CleanPoly.variable(0, 2, 3), CleanPoly.zero(2, 3)))
    assert g.image_size() == 3
    assert not independence_check(g)
    with pytest.raises(DomainError):
        square_invert(g)


def test_square_group_shape_check():
    with pytest.raises(DomainError):
        SquareGroup(3, (CleanPoly.variable(0, 1, 3), CleanPoly.variable(0, 1, 3)))
