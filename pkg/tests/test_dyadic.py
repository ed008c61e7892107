"""Canonical dyadic arithmetic.

Core claims:
    - canonicalize produces the unique odd-numerator (or level-0) form
    - values and decimal strings are exact
    - grid membership and index mapping agree with the raw integers
"""

import pytest

from dyadicbm.dyadic import Dyadic, canonicalize


def test_canonicalize_divides_out_twos():
    assert canonicalize(6, 3) == Dyadic(3, 2)


def test_zero_canonicalizes_to_level_zero():
    assert canonicalize(0, 5) == Dyadic(0, 0)


def test_odd_numerator_unchanged():
    assert canonicalize(7, 4) == Dyadic(7, 4)


def test_integers_stay_at_level_zero():
    assert canonicalize(6, 0) == Dyadic(6, 0)


@pytest.mark.parametrize("k,n", [(1, 0), (3, 2), (5, 7), (12, 0)])
def test_canonicalize_idempotent(k, n):
    d = canonicalize(k, n)
    assert canonicalize(d.numerator, d.level) == d


def test_scaling_does_not_change_the_value():
    for k, n in [(3, 2), (1, 0), (9, 5)]:
        for j in range(4):
            assert canonicalize(k << j, n + j) == canonicalize(k, n)


def test_non_canonical_constructor_rejected():
    with pytest.raises(ValueError):
        Dyadic(6, 3)
    with pytest.raises(ValueError):
        Dyadic(-1, 0)


def test_value_is_exact():
    assert Dyadic(3, 2).value == 0.75
    assert Dyadic(0, 0).value == 0.0
    assert Dyadic(9, 3).value == 1.125


@pytest.mark.parametrize(
    "d,text",
    [
        (Dyadic(0, 0), "0"),
        (Dyadic(2, 0), "2"),
        (Dyadic(3, 2), "0.75"),
        (Dyadic(1, 3), "0.125"),
        (Dyadic(5, 1), "2.5"),
        (Dyadic(9, 3), "1.125"),
        (Dyadic(1, 10), "0.0009765625"),
    ],
)
def test_exact_decimal_strings(d, text):
    assert d.decimal() == text
    assert float(d.decimal()) == d.value


def test_from_float_round_trips():
    for d in [Dyadic(3, 2), Dyadic(0, 0), Dyadic(7, 9), Dyadic(11, 0)]:
        assert Dyadic.from_float(d.value) == d
    with pytest.raises(ValueError):
        Dyadic.from_float(-0.5)


def test_grid_membership_and_index():
    d = Dyadic(3, 2)
    assert d.is_on_level(2) and d.is_on_level(6)
    assert not d.is_on_level(1)
    assert d.index_at_level(2) == 3
    assert d.index_at_level(6) == 48
    with pytest.raises(ValueError):
        d.index_at_level(1)


def test_ordering_matches_values():
    pts = [Dyadic(3, 2), Dyadic(1, 3), Dyadic(1, 0), Dyadic(0, 0)]
    assert sorted(pts) == sorted(pts, key=lambda d: d.value)
