from __future__ import annotations

import math
from fractions import Fraction

import pytest

from upslopes.arith import valuation
from upslopes.clay import (
    _TABLES,
    _case,
    _ev,
    clay_slope_p5,
    clay_slopes,
    clay_value,
    compare_predictions,
    period,
    split_index,
    valuation_of_ratio,
)
from upslopes.spectral import Slope, SlopeMultiset


def _direct(p, e, numer, denom):
    x = Fraction(p**e if e >= 0 else Fraction(1, p**-e))
    for n in numer:
        x *= math.factorial(n)
    for n in denom:
        x /= math.factorial(n)
    return valuation(x, p)


def test_p5_examples():
    assert clay_slope_p5(1) == 1 == valuation(5 * 2 * 6, 5)
    assert clay_slope_p5(2) == 4
    assert clay_slope_p5(3) == _direct(5, 3, [8, 9], [3, 2])
    with pytest.raises(ValueError):
        clay_slope_p5(0)


def test_p11_examples():
    assert clay_value(11, 1, 2) == 1
    assert clay_value(11, 1, 0) == 4
    assert clay_value(11, 1, 1) == 0
    assert clay_value(11, 2, 0) == 10  # v_11(11^8 12! 11!)
    assert clay_value(11, 0, 3) is None


@pytest.mark.parametrize("p", [5, 11, 17, 19])
def test_legendre_kernel_matches_factorization(p):
    P = period(p)
    checked = 0
    for j in range(0, 60):
        for k in range(P):
            c = _case(p, k)
            e = _ev(c.exponent, j, k)
            numer = [_ev(f, j, k) for f in c.numer]
            denom = [_ev(f, j, k) for f in c.denom]
            if max(numer + denom) > 500:
                continue
            got = valuation_of_ratio(p, e, numer, denom)
            if min(numer + denom) < 0:
                assert got is None
                continue
            assert got == _direct(p, e, numer, denom)
            assert got >= 0
            checked += 1
    assert checked > 10


def test_periods_and_tables():
    assert [period(p) for p in (5, 11, 17, 19)] == [1, 5, 12, 15]
    for p, cases in _TABLES.items():
        covered = sorted(k for c in cases for k in range(c.k_range[0], c.k_range[1] + 1))
        assert covered == list(range(period(p)))
    with pytest.raises(ValueError):
        period(13)


def test_first_period_values():
    assert clay_slopes(11, 9).values == [None, None, None, None, 4, 0, 1, 2, 3]
    assert clay_slopes(17, 12, start=12).values == [7, 0, 0, 1, 2, 2, 3, 4, 5, 5, 6, 7]
    assert clay_slopes(19, 15, start=15).values == [8, 0, 0, 1, 2, 2, 3, 4, 4, 5, 6, 6, 7, 7, 8]
    assert split_index(19, 16) == (1, 1)


def test_prediction_records_convention_and_corrections():
    pred = clay_slopes(19, 20)
    doc = pred.to_json()
    assert "15*j + k" in doc["convention"]
    assert len(doc["corrections"]) == 2
    assert doc["undefined_indices"] == list(range(1, 15))
    assert all(v is None or isinstance(v, str) for v in doc["values"])
    assert "v_11" in clay_slopes(11, 5).corrections[0]


def test_compare_identical_and_missing():
    pred = clay_slopes(11, 9)
    rep = compare_predictions(pred, [0, 1, 2, 3, 4], 5)
    assert rep.match and rep.to_json()["match"] is True
    rep = compare_predictions(pred, [0, 1, 2, 3, 3], 5)
    assert not rep.match
    assert rep.missing == [3] and rep.extra == [4]
    sl = SlopeMultiset((Slope(Fraction(0), 1), Slope(Fraction(1), 1), Slope(Fraction(2), 3, True, True)))
    with pytest.raises(ValueError):
        compare_predictions(pred, sl, 5)
