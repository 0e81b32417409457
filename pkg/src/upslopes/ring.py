"""Finite-precision p-adic coefficient rings.

Two rings are supported, both fixed by a :class:`RingContext`:

* ``Z/p^N`` (``ramified=False``);
* ``R = (Z/p^N)[pi]/(pi^2 - p)`` (``ramified=True``), a truncation of the
  ring of integers of ``Q_p(sqrt(p))``.

Valuations are normalized so that ``v(p) = 1`` and ``v(pi) = 1/2``.  An
element that vanishes modulo ``p^N`` has no known valuation; it is reported
as the bound ``>= N``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .arith import is_prime, to_residue


class ContextMismatch(ValueError):
    pass


class NonUnitError(ArithmeticError):
    """Raised when inverting an element of positive valuation."""

    def __init__(self, valuation: "Valuation"):
        super().__init__(f"non-unit pivot (valuation {valuation})")
        self.valuation = valuation


@total_ordering
@dataclass(frozen=True)
class Valuation:
    """A half-integral valuation, or the bound ``>= N`` for zero within precision."""

    twice: int
    bound: bool = False

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __lt__(self, other: "Valuation") -> bool:
        return (self.twice, self.bound) < (other.twice, other.bound)

    def __add__(self, other: "Valuation") -> "Valuation":
        return Valuation(self.twice + other.twice, self.bound or other.bound)

    def __str__(self) -> str:
        v = self.value
        s = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return f">={s}" if self.bound else s


def _vp(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class RingContext:
    p: int
    N: int
    ramified: bool = True

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("precision N must be positive")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def __call__(self, a: int | Fraction = 0, b: int | Fraction = 0) -> "RingElement":
        m = self.modulus
        a = to_residue(a, m) if isinstance(a, Fraction) else a % m
        b = to_residue(b, m) if isinstance(b, Fraction) else b % m
        if b and not self.ramified:
            raise ValueError("pi is not in the unramified ring")
        return RingElement(self, a, b)

    def zero(self) -> "RingElement":
        return RingElement(self, 0, 0)

    def one(self) -> "RingElement":
        return RingElement(self, 1 % self.modulus, 0)

    def pi(self) -> "RingElement":
        if not self.ramified:
            raise ValueError("pi is not in the unramified ring")
        return RingElement(self, 0, 1 % self.modulus)

    def with_precision(self, N: int) -> "RingContext":
        return RingContext(self.p, N, self.ramified)

    def pi_power(self, e: int) -> "RingElement":
        """pi^e for e >= 0 (p^(e/2) when e is even)."""
        q, r = divmod(e, 2)
        if r:
            return RingElement(self, 0, self.p**q % self.modulus)
        return RingElement(self, self.p**q % self.modulus, 0)


class RingElement:
    """The value ``a + b*pi`` with residues ``a, b`` in ``[0, p^N)``."""

    __slots__ = ("ctx", "a", "b")

    def __init__(self, ctx: RingContext, a: int, b: int = 0):
        self.ctx = ctx
        self.a = a
        self.b = b

    def _check(self, other) -> "RingElement":
        if isinstance(other, int):
            return self.ctx(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        m = self.ctx.modulus
        return RingElement(self.ctx, (self.a + other.a) % m, (self.b + other.b) % m)

    __radd__ = __add__

    def __neg__(self):
        m = self.ctx.modulus
        return RingElement(self.ctx, -self.a % m, -self.b % m)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        m = self.ctx.modulus
        return RingElement(self.ctx, (self.a - other.a) % m, (self.b - other.b) % m)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        m = self.ctx.modulus
        a, b, c, d = self.a, self.b, other.a, other.b
        if not b and not d:
            return RingElement(self.ctx, a * c % m, 0)
        return RingElement(self.ctx, (a * c + b * d * self.ctx.p) % m, (a * d + b * c) % m)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ctx == other.ctx and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.ctx, self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        return f"RingElement({self})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}*pi"
        return f"{self.a}+{self.b}*pi"

    def valuation(self) -> Valuation:
        return valuation(self)

    def is_unit(self) -> bool:
        return self.a % self.ctx.p != 0

    def inverse(self) -> "RingElement":
        return ring_invert(self)

    def reduce(self, N: int) -> "RingElement":
        """Image in the same ring at a lower precision."""
        return self.ctx.with_precision(N)(self.a, self.b)

    def divide_by_pi(self, e: int) -> "RingElement":
        """Exact quotient by pi^e; fails unless the valuation is at least e/2.

        The result is only determined modulo p^(N - ceil(e/2)); the returned
        residue is the canonical one and the caller accounts for the loss.
        """
        p, m = self.ctx.p, self.ctx.modulus
        a, b = self.a, self.b
        for _ in range(e):
            if a % p:
                raise ArithmeticError(f"{self} is not divisible by pi^{e}")
            # (a + b pi) / pi = b + (a/p) pi
            a, b = b, a // p
        return RingElement(self.ctx, a % m, b % m)

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}

    @classmethod
    def from_json(cls, ctx: RingContext, data: dict) -> "RingElement":
        return ctx(int(data["a"]), int(data.get("b", "0")))


def ring_add(x: RingElement, y: RingElement) -> RingElement:
    return x + y


def ring_mul(x: RingElement, y: RingElement) -> RingElement:
    return x * y


def ring_neg(x: RingElement) -> RingElement:
    return -x


def valuation(x: RingElement) -> Valuation:
    """v(a + b*pi) = min(v_p(a), v_p(b) + 1/2); zero gives the bound >= N."""
    N, p = x.ctx.N, x.ctx.p
    va = _vp(x.a, p, N)
    vb = _vp(x.b, p, N)
    twice = min(2 * va, 2 * vb + 1)
    if twice >= 2 * N:
        return Valuation(2 * N, bound=True)
    return Valuation(twice)


def ring_invert(x: RingElement) -> RingElement:
    """Inverse of a unit, exact in the ring."""
    ctx = x.ctx
    m, p = ctx.modulus, ctx.p
    if x.a % p == 0:
        raise NonUnitError(valuation(x))
    if not x.b:
        return RingElement(ctx, pow(x.a, -1, m), 0)
    # (a + b pi)^-1 = (a - b pi) / (a^2 - p b^2), and the norm is a unit
    norm_inv = pow((x.a * x.a - p * x.b * x.b) % m, -1, m)
    return RingElement(ctx, x.a * norm_inv % m, -x.b * norm_inv % m)
