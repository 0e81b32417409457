"""Truncated Laurent series in q.

A :class:`LaurentSeries` stores the coefficients of ``q^low .. q^(qprec-1)``;
everything from ``q^qprec`` on is unknown.  Coefficients live in one of

* ``ZZ`` -- exact integers,
* ``QQ`` -- exact rationals (``fractions.Fraction``),
* a :class:`~upslopes.ring.RingContext` -- residues mod ``p^N``, with an
  optional second list holding the ``pi``-parts in the ramified ring.

Modular coefficients are kept as plain ``int`` lists rather than
``RingElement`` objects; products go through Kronecker substitution, which
is bit-identical to the schoolbook convolution (both are tested).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from .ring import ContextMismatch, NonUnitError, RingContext, RingElement, valuation


class _ExactRing:
    def __init__(self, name: str, kind):
        self.name = name
        self.kind = kind

    def __repr__(self):
        return self.name


ZZ = _ExactRing("ZZ", int)
QQ = _ExactRing("QQ", Fraction)

CoefficientRing = Union[_ExactRing, RingContext]


class PrecisionError(ValueError):
    pass


def _kronecker(a: Sequence[int], b: Sequence[int], n: int, m: int) -> list[int]:
    """First n coefficients of a*b mod m, for residues in [0, m)."""
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [0] * n
    width = 2 * m.bit_length() + min(len(a), len(b)).bit_length() + 1
    nbytes = (width + 7) // 8
    A = int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in a), "little")
    B = int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in b), "little")
    C = (A * B).to_bytes(nbytes * (len(a) + len(b)), "little")
    out = [int.from_bytes(C[i * nbytes:(i + 1) * nbytes], "little") % m for i in range(min(n, len(a) + len(b) - 1))]
    out.extend([0] * (n - len(out)))
    return out


def _schoolbook(a: Sequence, b: Sequence, n: int, m: int | None) -> list:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        for j, y in enumerate(b[: n - i]):
            out[i + j] += x * y
    if m is not None:
        out = [x % m for x in out]
    return out


def _conv(a, b, n, m, fast):
    if m is not None and fast:
        return _kronecker(a, b, n, m)
    return _schoolbook(a, b, n, m)


class LaurentSeries:
    __slots__ = ("ring", "low", "coeffs", "pcoeffs", "qprec")

    def __init__(self, ring: CoefficientRing, low: int, coeffs, qprec: int | None = None, pcoeffs=None):
        if qprec is None:
            qprec = low + len(coeffs)
        if qprec <= low:
            raise PrecisionError("qprec must exceed the lowest exponent")
        n = qprec - low
        coeffs = list(coeffs[:n]) + [0] * (n - len(coeffs))
        if isinstance(ring, RingContext):
            m = ring.modulus
            coeffs = [int(c) % m for c in coeffs]
            if pcoeffs is not None:
                pcoeffs = list(pcoeffs[:n]) + [0] * (n - len(pcoeffs))
                pcoeffs = [int(c) % m for c in pcoeffs]
                if not any(pcoeffs):
                    pcoeffs = None
                elif not ring.ramified:
                    raise ValueError("pi-parts in an unramified ring")
        elif ring is QQ:
            coeffs = [Fraction(c) for c in coeffs]
            pcoeffs = None
        else:
            coeffs = [int(c) for c in coeffs]
            pcoeffs = None
        self.ring = ring
        self.low = low
        self.coeffs = coeffs
        self.pcoeffs = pcoeffs
        self.qprec = qprec

    # construction ---------------------------------------------------------

    @classmethod
    def one(cls, ring: CoefficientRing, qprec: int) -> "LaurentSeries":
        return cls(ring, 0, [1], qprec)

    @classmethod
    def monomial(cls, ring: CoefficientRing, e: int, qprec: int, c=1) -> "LaurentSeries":
        return cls(ring, e, [c], qprec)

    @property
    def _m(self) -> int | None:
        return self.ring.modulus if isinstance(self.ring, RingContext) else None

    def __len__(self):
        return self.qprec - self.low

    def __getitem__(self, e: int):
        """Coefficient of q^e (a RingElement over a p-adic ring)."""
        if e >= self.qprec:
            raise PrecisionError(f"q^{e} is beyond the known precision q^{self.qprec}")
        if e < self.low:
            c, pc = 0, 0
        else:
            c = self.coeffs[e - self.low]
            pc = self.pcoeffs[e - self.low] if self.pcoeffs else 0
        if isinstance(self.ring, RingContext):
            return RingElement(self.ring, c, pc)
        return c

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs[:8]):
            if c or (self.pcoeffs and self.pcoeffs[i]):
                terms.append(f"{self[self.low + i]}*q^{self.low + i}")
        return f"LaurentSeries({' + '.join(terms) or '0'} + O(q^{self.qprec}))"

    def _check(self, other: "LaurentSeries"):
        if other.ring != self.ring:
            raise ContextMismatch(f"series over {self.ring} and {other.ring}")

    def _aligned(self, low: int, qprec: int, part: str = "coeffs") -> list:
        src = getattr(self, part)
        if src is None:
            return [0] * (qprec - low)
        out = [0] * (qprec - low)
        for i, c in enumerate(src):
            e = self.low + i
            if low <= e < qprec:
                out[e - low] = c
        return out

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = self._constant(other)
        self._check(other)
        low = min(self.low, other.low)
        qprec = min(self.qprec, other.qprec)
        a = [x + y for x, y in zip(self._aligned(low, qprec), other._aligned(low, qprec))]
        pc = None
        if self.pcoeffs or other.pcoeffs:
            pc = [x + y for x, y in zip(self._aligned(low, qprec, "pcoeffs"), other._aligned(low, qprec, "pcoeffs"))]
        return LaurentSeries(self.ring, low, a, qprec, pc)

    __radd__ = __add__

    def __neg__(self):
        pc = [-x for x in self.pcoeffs] if self.pcoeffs else None
        return LaurentSeries(self.ring, self.low, [-x for x in self.coeffs], self.qprec, pc)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = self._constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _constant(self, c) -> "LaurentSeries":
        if isinstance(c, RingElement):
            return LaurentSeries(self.ring, 0, [c.a], max(self.qprec, 1), [c.b] if c.b else None)
        return LaurentSeries(self.ring, 0, [c], max(self.qprec, 1))

    def scale(self, c) -> "LaurentSeries":
        """Multiply every coefficient by a scalar (int, Fraction or RingElement)."""
        m = self._m
        if isinstance(c, RingElement):
            if c.ctx != self.ring:
                raise ContextMismatch("scalar from another ring")
            p = self.ring.p
            pc = self.pcoeffs or [0] * len(self.coeffs)
            a = [(x * c.a + y * c.b * p) for x, y in zip(self.coeffs, pc)]
            b = [(x * c.b + y * c.a) for x, y in zip(self.coeffs, pc)]
            return LaurentSeries(self.ring, self.low, a, self.qprec, b)
        ring = self.ring
        if m is not None and isinstance(c, Fraction):
            from .arith import to_residue
            c = to_residue(c, m)
        elif ring is ZZ and isinstance(c, Fraction):
            if c.denominator == 1:
                c = c.numerator
            else:
                ring = QQ
        pc = [x * c for x in self.pcoeffs] if self.pcoeffs else None
        return LaurentSeries(ring, self.low, [x * c for x in self.coeffs], self.qprec, pc)

    def mul(self, other: "LaurentSeries", fast: bool = True) -> "LaurentSeries":
        """Product; ``fast`` selects Kronecker substitution over p-adic rings."""
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        self._check(other)
        low = self.low + other.low
        qprec = min(self.qprec + other.low, other.qprec + self.low)
        n = qprec - low
        m = self._m
        A, B = self.coeffs, other.coeffs
        P, Q = self.pcoeffs, other.pcoeffs
        ab = _conv(A, B, n, m, fast)
        if not P and not Q:
            return LaurentSeries(self.ring, low, ab, qprec)
        p = self.ring.p
        if P and Q:
            pq = _conv(P, Q, n, m, fast)
            real = [x + p * y for x, y in zip(ab, pq)]
            cross = [x + y for x, y in zip(_conv(A, Q, n, m, fast), _conv(P, B, n, m, fast))]
        elif P:
            real, cross = ab, _conv(P, B, n, m, fast)
        else:
            real, cross = ab, _conv(A, Q, n, m, fast)
        return LaurentSeries(self.ring, low, real, qprec, cross)

    def __mul__(self, other):
        return self.mul(other)

    __rmul__ = __mul__

    def valuation_q(self) -> int:
        """Exponent of the first nonzero coefficient (q-adic order)."""
        for i, c in enumerate(self.coeffs):
            if c or (self.pcoeffs and self.pcoeffs[i]):
                return self.low + i
        raise PrecisionError("series is zero to the known precision")

    def normalize(self) -> "LaurentSeries":
        """Drop leading zero coefficients."""
        e = self.valuation_q()
        k = e - self.low
        pc = self.pcoeffs[k:] if self.pcoeffs else None
        return LaurentSeries(self.ring, e, self.coeffs[k:], self.qprec, pc)

    def invert(self) -> "LaurentSeries":
        return series_invert(self)

    def __pow__(self, e: int) -> "LaurentSeries":
        return series_pow(self, e)

    def truncate(self, qprec: int) -> "LaurentSeries":
        if qprec > self.qprec:
            raise PrecisionError("cannot raise precision by truncation")
        pc = self.pcoeffs[: qprec - self.low] if self.pcoeffs else None
        return LaurentSeries(self.ring, self.low, self.coeffs[: qprec - self.low], qprec, pc)

    def change_ring(self, ring: RingContext) -> "LaurentSeries":
        """Reduce an exact (p-integral) series into Z/p^N or its ramified extension."""
        if isinstance(self.ring, RingContext):
            if ring.p != self.ring.p or ring.N > self.ring.N:
                raise ContextMismatch("can only reduce to lower precision")
            return LaurentSeries(ring, self.low, self.coeffs, self.qprec, self.pcoeffs)
        from .arith import to_residue
        m = ring.modulus
        return LaurentSeries(ring, self.low, [to_residue(c, m) for c in self.coeffs], self.qprec)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by q^k."""
        return LaurentSeries(self.ring, self.low + k, self.coeffs, self.qprec + k, self.pcoeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.ring != other.ring or self.qprec != other.qprec:
            return False
        low = min(self.low, other.low)
        return self._aligned(low, self.qprec) == other._aligned(low, self.qprec) and self._aligned(
            low, self.qprec, "pcoeffs"
        ) == other._aligned(low, self.qprec, "pcoeffs")

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality of coefficients up to the smaller of the two precisions."""
        self._check(other)
        low = min(self.low, other.low)
        qprec = min(self.qprec, other.qprec)
        return self._aligned(low, qprec) == other._aligned(low, qprec) and self._aligned(
            low, qprec, "pcoeffs"
        ) == other._aligned(low, qprec, "pcoeffs")

    def is_zero(self) -> bool:
        return not any(self.coeffs) and not (self.pcoeffs and any(self.pcoeffs))

    def coefficient_list(self, start: int, stop: int) -> list:
        return [self[e] for e in range(start, stop)]


def series_add(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    return f + g


def series_mul(f: LaurentSeries, g: LaurentSeries, fast: bool = True) -> LaurentSeries:
    return f.mul(g, fast=fast)


def _leading_inverse(f: LaurentSeries):
    c = f[f.low]
    if isinstance(f.ring, RingContext):
        if not c.is_unit():
            raise NonUnitError(valuation(c))
        return c.inverse()
    if c == 0:
        raise NonUnitError(None)
    if f.ring is ZZ and c not in (1, -1):
        raise NonUnitError(None)
    return Fraction(1, 1) / c if f.ring is QQ else c


def series_invert(f: LaurentSeries) -> LaurentSeries:
    """Multiplicative inverse of a series whose coefficient at q^low is a unit."""
    inv0 = _leading_inverse(f)
    n = f.qprec - f.low
    low = -f.low
    qprec = low + n
    ring = f.ring
    if not isinstance(ring, RingContext):
        a = f.coeffs
        g = [0] * n
        g[0] = inv0
        for k in range(1, n):
            s = 0
            for i in range(1, k + 1):
                if a[i]:
                    s += a[i] * g[k - i]
            g[k] = -s * inv0
        if ring is ZZ:
            g = [int(x) for x in g]
        return LaurentSeries(ring, low, g, qprec)
    # Newton iteration g <- g + g(1 - f g), doubling the known length
    unit = f.shift(-f.low)
    g = LaurentSeries(ring, 0, [inv0.a], 1, [inv0.b] if inv0.b else None)
    k = 1
    while k < n:
        k = min(2 * k, n)
        fk = unit.truncate(k)
        g = LaurentSeries(ring, 0, g.coeffs, k, g.pcoeffs)
        err = LaurentSeries.one(ring, k) - fk.mul(g)
        g = g + g.mul(err)
    return g.shift(low)


def series_pow(f: LaurentSeries, e: int) -> LaurentSeries:
    if e < 0:
        return series_pow(series_invert(f), -e)
    result = LaurentSeries.one(f.ring, f.qprec - f.low)
    if e == 0:
        return result
    base = f
    first = True
    while e:
        if e & 1:
            result = base if first else result.mul(base)
            first = False
        e >>= 1
        if e:
            base = base.mul(base)
    return result


def u_p_decimate(f: LaurentSeries, p: int) -> LaurentSeries:
    """The U_p operator on q-expansions: sum a_n q^n -> sum a_(pn) q^n."""
    if f.low < 0:
        raise ValueError("U_p decimation needs a series without polar part")
    low = -(-f.low // p)
    qprec = -(-f.qprec // p)
    coeffs = [f.coeffs[p * n - f.low] for n in range(low, qprec)]
    pc = [f.pcoeffs[p * n - f.low] for n in range(low, qprec)] if f.pcoeffs else None
    return LaurentSeries(f.ring, low, coeffs, qprec, pc)
