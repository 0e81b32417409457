"""Classical level-one q-expansions: Eisenstein series, Delta and j."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import bernoulli, divisor_sigma, valuation
from .qseries import QQ, ZZ, LaurentSeries, series_invert
from .ring import RingContext


@dataclass(frozen=True)
class FormSpec:
    kind: str  # "eisenstein" | "delta" | "j"
    weight: int = 0
    qprec: int = 2

    def __post_init__(self):
        if self.kind not in ("eisenstein", "delta", "j"):
            raise ValueError(f"unknown form kind {self.kind!r}")
        if self.kind == "eisenstein" and (self.weight < 4 or self.weight % 2):
            raise ValueError("Eisenstein series need even weight >= 4")
        if self.qprec < 2:
            raise ValueError("qprec must be at least 2")


def eisenstein_factor(k: int) -> Fraction:
    """-2k/B_k, the coefficient multiplying sigma_(k-1)(n) in E_k."""
    if k < 4 or k % 2:
        raise ValueError("Eisenstein series need even weight >= 4")
    return -2 * k / bernoulli(k)


def eisenstein_is_p_integral(k: int, p: int) -> bool:
    return valuation(eisenstein_factor(k), p) >= 0


@lru_cache(maxsize=64)
def _eisenstein_coeffs(k: int, qprec: int) -> tuple[Fraction, ...]:
    c = eisenstein_factor(k)
    return (Fraction(1),) + tuple(c * divisor_sigma(n, k - 1) for n in range(1, qprec))


def eisenstein(k: int, qprec: int, ring: RingContext | None = None) -> LaurentSeries:
    """E_k = 1 - (2k/B_k) sum sigma_(k-1)(n) q^n, over QQ or reduced into ``ring``."""
    coeffs = _eisenstein_coeffs(k, qprec)
    if ring is None:
        if all(c.denominator == 1 for c in coeffs):
            return LaurentSeries(ZZ, 0, [int(c) for c in coeffs], qprec)
        return LaurentSeries(QQ, 0, coeffs, qprec)
    if not eisenstein_is_p_integral(k, ring.p):
        raise ValueError(f"E_{k} is not {ring.p}-integral")
    return LaurentSeries(QQ, 0, coeffs, qprec).change_ring(ring)


def _eta_cube(n: int, ring) -> LaurentSeries:
    # Jacobi: prod (1 - q^m)^3 = sum_k (-1)^k (2k+1) q^(k(k+1)/2)
    coeffs = [0] * n
    k = 0
    while k * (k + 1) // 2 < n:
        coeffs[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return LaurentSeries(ring, 0, coeffs, n)


def delta_over_q(n: int, ring: RingContext | None = None) -> LaurentSeries:
    """prod_{m>=1} (1 - q^m)^24 to n terms."""
    f = _eta_cube(n, ring or ZZ)
    for _ in range(3):
        f = f * f
    return f


def delta(qprec: int, ring: RingContext | None = None) -> LaurentSeries:
    """Delta = q prod (1 - q^n)^24, known through q^(qprec-1)."""
    if qprec < 2:
        raise ValueError("qprec must be at least 2")
    return delta_over_q(qprec - 1, ring).shift(1)


def j_invariant(qprec: int, ring: RingContext | None = None) -> LaurentSeries:
    """j = E_4^3 / Delta = q^-1 + 744 + 196884 q + ..., known through q^(qprec-1)."""
    if qprec < 0:
        raise ValueError("qprec must be at least 0")
    n = qprec + 1
    e4 = eisenstein(4, n, ring)
    num = e4 * e4 * e4
    return (num * series_invert(delta_over_q(n, ring))).shift(-1)
