"""Slope-0 eigenvectors of the U_p matrix by power iteration with deflation.

Deflation by coordinate elimination: with a known eigenpair (w, mu) whose
normalizing coordinate is k (w_k = 1), the map B v = M v - (M v)_k w has the
eigenvalues of M with mu replaced by 0, acts on {v : v_k = 0}, and an
eigenvector y of B for lambda lifts to y + alpha w with
alpha = (M y)_k / (lambda - mu).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .ring import RingContext, RingElement


class EigenError(ArithmeticError):
    pass


class SlopeNotSimple(EigenError):
    pass


class InsufficientPrecision(EigenError):
    pass


class UnsupportedTarget(EigenError):
    pass


@dataclass
class EigenResult:
    coordinates: list[RingElement]  # basis index order
    eigenvalue: RingElement
    slope: Fraction
    precision: int  # M v = lambda v holds mod p^precision
    iterations: int
    normalizing_index: int  # position of the coordinate fixed to 1
    indices: list[int] = field(default_factory=list)
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "indices": [str(i) for i in self.indices],
            "coordinates": [str(c) for c in self.coordinates],
            "eigenvalue": str(self.eigenvalue),
            "slope": str(self.slope),
            "guaranteed_precision": str(self.precision),
            "iterations": self.iterations,
            "normalizing_index": str(self.indices[self.normalizing_index]) if self.indices else str(self.normalizing_index),
            "seed": self.seed,
        }


def _entries(M):
    return getattr(M, "entries", M)


def _ring(M) -> RingContext:
    return M.ring if hasattr(M, "ring") else _entries(M)[0][0].ctx


def _apply(entries, v: Sequence[RingElement], ring: RingContext) -> list[RingElement]:
    zero = ring.zero()
    return [sum((a * x for a, x in zip(row, v)), zero) for row in entries]


def _min_valuation(vec: Sequence[RingElement], N: int) -> int:
    """Largest m with every entry divisible by p^m (capped at N)."""
    out = N
    for x in vec:
        v = x.valuation()
        if not v.bound:
            out = min(out, v.twice // 2)
    return out


def _divide(x: RingElement, y: RingElement) -> tuple[RingElement, int]:
    """x / y and the number of p-adic digits lost."""
    v = y.valuation()
    if v.bound:
        raise InsufficientPrecision("division by an element that vanishes mod p^N")
    t = v.twice
    unit = y.divide_by_pi(t)
    try:
        q = x.divide_by_pi(t)
    except ArithmeticError as exc:
        raise InsufficientPrecision("quotient is not integral") from exc
    return q * unit.inverse(), (t + 1) // 2


def _deflate(w: list[RingElement], targets: Sequence[EigenResult]) -> list[RingElement]:
    for e in targets:
        c = w[e.normalizing_index]
        if c:
            w = [a - c * b for a, b in zip(w, e.coordinates)]
    return w


def power_iterate(
    M,
    start: Sequence[RingElement],
    steps: int,
    deflate_against: Sequence[EigenResult] = (),
    seed: int | None = None,
) -> EigenResult:
    """Iterate v <- normalize(M v - deflation) and read off the eigenvalue."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    entries = _entries(M)
    ring = _ring(M)
    N = ring.N
    n = len(entries)
    if len(start) != n:
        raise ValueError("start vector has the wrong length")
    targets = list(deflate_against)
    v = _deflate(list(start), targets)
    k = None
    for _ in range(steps):
        w = _deflate(_apply(entries, v, ring), targets)
        if k is None:
            # fix the first unit coordinate once
            k = next((i for i, x in enumerate(w) if x.is_unit()), None)
            if k is None:
                raise InsufficientPrecision("no unit coordinate; the target slope is not 0 or N is too small")
        if not w[k].is_unit():
            raise SlopeNotSimple("normalizing coordinate lost its unit value during iteration")
        inv = w[k].inverse()
        v = [x * inv for x in w]
    Bv = _deflate(_apply(entries, v, ring), targets)
    lam = Bv[k]
    if not lam.is_unit():
        raise UnsupportedTarget("only slope-0 eigenvectors are supported")
    # every unit coordinate must give the same ratio to the reported precision
    resid = [a - lam * b for a, b in zip(Bv, v)]
    prec = _min_valuation(resid, N)
    if prec < 1:
        raise SlopeNotSimple("eigenvalue ratios disagree at unit coordinates")
    loss = 0
    for e in reversed(targets):
        # lift back through each deflation
        mv = _apply(entries, v, ring)
        alpha, lost = _divide(mv[e.normalizing_index] - lam * v[e.normalizing_index], lam - e.eigenvalue)
        loss = max(loss, lost)
        v = [a + alpha * b for a, b in zip(v, e.coordinates)]
        inv = v[k].inverse()
        v = [x * inv for x in v]
    resid = [a - lam * b for a, b in zip(_apply(entries, v, ring), v)]
    prec = min(_min_valuation(resid, N), N - loss)
    if prec < 1:
        raise SlopeNotSimple("eigenvector residual is not small after lifting")
    indices = list(getattr(M, "indices", []) or [])
    return EigenResult(v, lam, Fraction(0), prec, steps, k, indices, seed)


def basis_vector(ring: RingContext, n: int, position: int) -> list[RingElement]:
    v = [ring.zero()] * n
    v[position] = ring.one()
    return v


def random_start(ring: RingContext, n: int, seed: int) -> list[RingElement]:
    """A reproducible start vector with unit coordinates in Z/p^N."""
    rng = random.Random(seed)
    p, m = ring.p, ring.modulus
    out = []
    for _ in range(n):
        x = rng.randrange(m)
        while x % p == 0:
            x = rng.randrange(m)
        out.append(ring(x))
    return out


def noncuspidal_fixed_vector(M, steps: int = 2) -> EigenResult:
    """The slope-0 eigenvector through the constant coordinate, found from e_0."""
    entries = _entries(M)
    ring = _ring(M)
    spec = getattr(M, "spec", None)
    if spec is not None and spec.weight != 0:
        raise ValueError("the constant eigenvector exists in weight 0 only")
    res = power_iterate(M, basis_vector(ring, len(entries), 0), steps)
    if res.coordinates[0].valuation().bound or not res.coordinates[0].is_unit():
        raise SlopeNotSimple("fixed vector has no unit constant coordinate")
    return res


def cuspidal_eigenvector(M, steps: int = 9, start: Sequence[RingElement] | None = None, seed: int | None = None) -> EigenResult:
    """Lowest-slope eigenvector after removing the constant eigenvector.

    The default start is the basis vector for z (index +1).
    """
    ring = _ring(M)
    n = len(_entries(M))
    fixed = noncuspidal_fixed_vector(M)
    if start is None:
        start = random_start(ring, n, seed) if seed is not None else basis_vector(ring, n, 1)
    return power_iterate(M, start, steps, [fixed], seed)
