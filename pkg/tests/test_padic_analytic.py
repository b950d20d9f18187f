import pytest

from src.modcalc.core_ring import DomainError, NonUnitError, NotPrimeError
from src.modcalc.dlog_cache import DlogCache
from src.modcalc.padic_analytic import (
    PrecisionContext,
    compute_E,
    even_series_exp,
    even_series_log,
    find_generator,
    lm_composite,
    lm_extended,
    lm_full,
    lm_principal,
    modulated_derivative,
    plm,
    pow_E,
    pth_root_unit,
    sqrt_e,
)

CACHE = DlogCache(enabled=False)


def test_compute_E_anchors():
    assert compute_E(PrecisionContext(3, 2)).rep == 4
    assert compute_E(PrecisionContext(3, 3)).rep == 13
    assert str(compute_E(PrecisionContext(3, 3))) == "13 (mod 27)"


def test_find_generator_anchors():
    gp = find_generator(PrecisionContext(3, 2))
    assert gp.e.rep == 5 and gp.E.rep == 4
    assert find_generator(PrecisionContext(3, 1)).e.rep == 2
    assert find_generator(PrecisionContext(7, 1)).e.rep == 3


def test_generator_is_compatible_with_E():
    for p, m in ((3, 3), (5, 2), (7, 2), (11, 2)):
        ctx = PrecisionContext(p, m)
        gp = find_generator(ctx)
        q = ctx.modulus
        assert pow(gp.e.rep, 1 - q, q) == gp.E.rep


def test_lm_full_anchors():
    gp = find_generator(PrecisionContext(3, 2))
    lv = lm_full(7, gp, CACHE)
    assert str(lv) == "2 (mod 6)"
    assert lm_full(-1, gp, CACHE).rep == 3


ROUNDTRIP_CASES = [(p, m) for p in (3, 5, 7, 11) for m in range(1, 12) if p ** m <= 10 ** 5]


@pytest.mark.parametrize("p, m", ROUNDTRIP_CASES)
def test_lm_full_inverts_exponentiation(p, m):
    ctx = PrecisionContext(p, m)
    gp = find_generator(ctx)
    q = ctx.modulus
    for x in range(1, q):
        if x % p:
            assert pow(gp.e.rep, lm_full(x, gp, CACHE).rep, q) == x


@pytest.mark.parametrize("p", [3, 5, 7, 11])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_five_more_terms_change_nothing(p, m):
    ctx = PrecisionContext(p, m)
    deeper = ctx.with_terms(ctx.n_terms + 5)
    q = ctx.modulus
    assert ctx.tail_valuation() >= m
    assert compute_E(deeper).rep == compute_E(ctx).rep
    assert all(pow_E(x, deeper).rep == pow_E(x, ctx).rep for x in range(q))
    for u in range(1, q, p):
        assert lm_principal(u, deeper).rep == lm_principal(u, ctx).rep


def test_too_few_terms_rejected():
    # first omitted term 3^3/3! has valuation 2
    with pytest.raises(DomainError):
        PrecisionContext(3, 4, n_terms=2)
    assert PrecisionContext(3, 2, n_terms=2).tail_valuation() == 2


def test_lm_full_rejects_non_unit():
    gp = find_generator(PrecisionContext(3, 2))
    with pytest.raises(NonUnitError):
        lm_full(3, gp, CACHE)


def test_lm_principal_anchor_and_exp_roundtrip():
    ctx = PrecisionContext(3, 3)
    assert lm_principal(4, ctx).rep == 7
    # E^lm_E(u) = u on the principal units
    for u in range(1, 27, 3):
        assert pow_E(lm_principal(u, ctx).rep, ctx).rep == u
    with pytest.raises(DomainError):
        lm_principal(2, ctx)


def test_lm_minus_one_component_values():
    comp = lm_composite(-1, 225, CACHE)
    assert str(comp) == "(3 (mod 6), 10 (mod 20))"
    assert comp.reconstruct().rep == 224


def test_lm_composite_rejects_shared_factor():
    with pytest.raises(NonUnitError):
        lm_composite(5, 225, CACHE)
    with pytest.raises(DomainError):
        lm_composite(3, 8, CACHE)


def test_lm_extended_uses_plm_branch():
    ctx = PrecisionContext(3, 2)
    gp = find_generator(ctx)
    assert lm_extended(7, gp, CACHE) == lm_full(7, gp, CACHE)
    assert lm_extended(6, gp, CACHE).rep == plm(2, ctx).rep % 3
    with pytest.raises(NonUnitError):
        lm_extended(9, gp, CACHE)


def test_plm_is_additive():
    ctx = PrecisionContext(3, 2)
    for x in (2, 4, 5, 7):
        for y in (2, 4, 8):
            assert plm(x * y, ctx).rep == (plm(x, ctx).rep + plm(y, ctx).rep) % 9


def test_sqrt_e():
    gp = find_generator(PrecisionContext(7, 1))
    root, residue = sqrt_e(2, gp, CACHE)
    assert root.rep == 3 and residue
    _, residue = sqrt_e(3, gp, CACHE)
    assert not residue


def test_pth_root_unit():
    assert pth_root_unit(10, PrecisionContext(3, 2)).rep == 4
    with pytest.raises(DomainError):
        pth_root_unit(4, PrecisionContext(3, 2))


def test_modulated_derivative_of_square():
    # ((x + 3)^2 - x^2) / 3 = 2x + 3
    assert modulated_derivative([0, 0, 1], PrecisionContext(3, 1)) == [0, 2]


def test_precision_context_guards():
    with pytest.raises(NotPrimeError):
        PrecisionContext(9, 2)
    with pytest.raises(DomainError):
        PrecisionContext(3, 0)
    with pytest.raises(DomainError):
        PrecisionContext(2, 3)


def test_even_series_roundtrip():
    ctx = PrecisionContext(2, 5, even_only=True)
    for x in range(0, 32, 2):
        u = even_series_exp(x, ctx)
        assert u.rep % 4 == 1
        assert even_series_log(u, ctx).rep == x % 16
    with pytest.raises(DomainError):
        even_series_exp(3, ctx)
