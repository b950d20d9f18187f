from fractions import Fraction

import pytest

from src.modcalc.core_ring import (
    DomainError,
    Modulus,
    NonUnitError,
    NotPrimeError,
    Residue,
    ValuedRational,
    carmichael,
    centered_rep,
    crt_combine,
    nth_root_set,
    radical,
    require_prime,
    unit_inverse_convention,
    val_part,
    valuation,
)


def test_modulus_factors_and_value():
    m = Modulus.of(225)
    assert m.factors == ((3, 2), (5, 2))
    assert m.value == 225
    assert m.components() == [9, 25]
    assert str(m) == "3^2·5^2"


def test_modulus_rejects_non_positive():
    with pytest.raises(DomainError):
        Modulus.of(0)


def test_residue_arithmetic_stays_in_range():
    a = Residue.of(7, 9)
    b = Residue.of(5, 9)
    assert (a + b).rep == 3
    assert (a - b).rep == 2
    assert (a * b).rep == 8
    assert (-a).rep == 2
    assert (a ** 2).rep == 4
    assert a.inverse().rep == 4  # 7 * 4 = 28 = 1 mod 9
    assert str(a) == "7 (mod 9)"


def test_residue_inverse_of_non_unit_raises():
    with pytest.raises(NonUnitError):
        Residue.of(3, 9).inverse()


def test_residue_mismatched_moduli():
    with pytest.raises(DomainError):
        Residue.of(1, 9) + Residue.of(1, 27)


def test_centered_rep_odd_and_even():
    assert [centered_rep(x, 5) for x in range(5)] == [0, 1, 2, -2, -1]
    assert [centered_rep(x, 4) for x in range(4)] == [0, 1, 2, -1]


def test_crt_combine():
    r = crt_combine([(2, 3), (3, 5)])
    assert r.rep == 8 and r.n == 15
    with pytest.raises(DomainError):
        crt_combine([(1, 6), (1, 4)])
    with pytest.raises(DomainError):
        crt_combine([])


def test_valuation_and_val_part():
    assert valuation(54, 3) == 3
    assert valuation(-8, 2) == 3
    assert val_part(360, 15) == 45
    with pytest.raises(DomainError):
        valuation(0, 3)


def test_radical_and_carmichael():
    assert radical(1) == 1
    assert radical(3 ** 11) == 3
    assert radical(225) == 15
    assert carmichael(9) == 6
    assert carmichael(15) == 4
    assert carmichael(8) == 2


def test_unit_inverse_convention():
    # [1/x]_{p^2} really is the inverse of x mod p^2
    for x in (1, 2, 4, 5, 7, 8):
        assert unit_inverse_convention(x, 3).rep * x % 9 == 1
    with pytest.raises(NonUnitError):
        unit_inverse_convention(6, 3)


def test_nth_root_set():
    roots = nth_root_set(Residue.of(2, 7), 2)
    assert {r.rep for r in roots} == {3, 4}
    assert nth_root_set(Residue.of(3, 7), 2) == frozenset()


def test_require_prime():
    assert require_prime(7) == 7
    with pytest.raises(NotPrimeError):
        require_prime(9)


def test_valued_rational_keeps_p_out_of_denominators():
    term = ValuedRational.of(9, 3) / 2  # p^2 / 2!
    assert term.valuation == 2
    assert term.unit == Fraction(1, 2)
    assert term.reduce(27) == 9 * 14 % 27  # 1/2 = 14 mod 27
    assert ValuedRational.of(27, 3).reduce(27) == 0
    with pytest.raises(DomainError):
        ValuedRational.of(Fraction(1, 3), 3).reduce(9)
