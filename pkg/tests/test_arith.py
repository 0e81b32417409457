from __future__ import annotations

import math
import threading
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from upslopes.arith import bernoulli, divisor_sigma, factorial_valuation, is_prime, to_residue, valuation


def _direct_factorial_valuation(n: int, p: int) -> int:
    x = math.factorial(n)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def test_bernoulli_small_values():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(10) == Fraction(5, 66)
    assert bernoulli(12) == Fraction(-691, 2730)


def test_bernoulli_odd_index_rejected():
    with pytest.raises(ValueError, match="zero Bernoulli, not used"):
        bernoulli(3)
    with pytest.raises(ValueError):
        bernoulli(-2)


@pytest.mark.parametrize("k", range(2, 62, 2))
def test_von_staudt_clausen_denominator(k):
    expected = math.prod(q for q in range(2, k + 2) if is_prime(q) and k % (q - 1) == 0)
    assert bernoulli(k).denominator == expected


def test_bernoulli_threads_agree():
    results = []

    def work():
        results.append([bernoulli(k) for k in range(0, 80, 2)])

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)


@pytest.mark.parametrize("n,p,v", [(0, 11, 0), (10, 5, 2), (11, 11, 1), (121, 11, 12), (24, 2, 22)])
def test_factorial_valuation_examples(n, p, v):
    assert factorial_valuation(n, p) == v


@given(st.integers(0, 2000), st.sampled_from([2, 3, 5, 7, 11, 17, 19]))
def test_legendre_matches_factorization(n, p):
    assert factorial_valuation(n, p) == _direct_factorial_valuation(n, p)


def test_factorial_valuation_negative():
    with pytest.raises(ValueError):
        factorial_valuation(-1, 5)


fractions = st.fractions(max_denominator=10**6).filter(lambda x: abs(x) < 10**9)


@given(fractions, fractions, fractions)
def test_rational_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a * b).denominator > 0


def test_valuation_and_residue():
    assert valuation(Fraction(242, 5), 11) == 2
    assert valuation(Fraction(3, 121), 11) == -2
    m = 11**5
    assert to_residue(Fraction(1, 3), m) * 3 % m == 1
    with pytest.raises(ValueError):
        valuation(0, 3)


def test_divisor_sigma_and_primes():
    assert divisor_sigma(12, 1) == 28
    assert divisor_sigma(2, 3) == 9
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
