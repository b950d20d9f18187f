import pytest

from utils.lcg import INCREMENT, MASK, MULTIPLIER, Lcg


def test_documented_constants():
    assert MULTIPLIER == 6364136223846793005
    assert INCREMENT == 1442695040888963407
    assert MASK == 2 ** 64 - 1


def test_first_output_from_zero_seed():
    rng = Lcg(0)
    assert rng.next() == INCREMENT >> 33
    assert rng.state == INCREMENT


def test_same_seed_same_stream():
    a, b = Lcg(42), Lcg(42)
    assert [a.next() for _ in range(50)] == [b.next() for _ in range(50)]
    assert [Lcg(1).next() for _ in range(3)] != [Lcg(2).next() for _ in range(3)]


def test_below_and_between_ranges():
    rng = Lcg(7)
    draws = [rng.below(6) for _ in range(600)]
    assert set(draws) == set(range(6))
    assert all(3 <= rng.between(3, 5) <= 5 for _ in range(100))
    assert rng.below(1) == 0
    big = [rng.below(3 ** 25) for _ in range(20)]
    assert all(0 <= v < 3 ** 25 for v in big)
    with pytest.raises(ValueError):
        rng.below(0)


def test_choice():
    rng = Lcg(3)
    items = ["a", "b", "c"]
    assert all(rng.choice(items) in items for _ in range(20))
