"""Exact integer and rational helpers: Bernoulli numbers, valuations of factorials."""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

Rational = Fraction

_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def _extend_bernoulli(n: int) -> None:
    # sum_{j<=m} C(m+1, j) B_j = 0, with B_1 = -1/2
    with _bernoulli_lock:
        table = _bernoulli_cache
        for m in range(len(table), n + 1):
            s = sum(comb(m + 1, j) * table[j] for j in range(m))
            table.append(-s / (m + 1))


def bernoulli(k: int) -> Fraction:
    """The k-th Bernoulli number (B_1 = -1/2, B_2 = 1/6) for even k >= 0."""
    if k < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if k % 2 == 1:
        if k == 1:
            return Fraction(-1, 2)
        raise ValueError("zero Bernoulli, not used")
    if k >= len(_bernoulli_cache):
        _extend_bernoulli(k)
    return _bernoulli_cache[k]


def factorial_valuation(n: int, p: int) -> int:
    """v_p(n!) by Legendre's formula."""
    if n < 0:
        raise ValueError("factorial of a negative integer")
    total = 0
    while n:
        n //= p
        total += n
    return total


def valuation(x: int | Fraction, p: int) -> int:
    """p-adic valuation of a nonzero integer or rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def divisor_sigma(n: int, k: int) -> int:
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d**k
            e = n // d
            if e != d:
                s += e**k
        d += 1
    return s


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def to_residue(x: int | Fraction, modulus: int) -> int:
    """Image of a p-integral rational in Z/modulus."""
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, modulus) % modulus
