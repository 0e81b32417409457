"""The annulus parameter and the Banach basis of overconvergent forms.

For a genus-one prime p let a, b be the two supersingular j-invariants and

    u = (j - a) / (j - b),        z = c * u,        c = pi * w  (w a unit).

The basis of weight-k forms is ``E_k * {1, z^i, (p/z)^i : i >= 1}``.  Basis
index ``+i`` stands for ``E_k z^i`` and ``-i`` for ``E_k (p/z)^i``, ordered
``0, +1, -1, +2, -2, ...``.  Since ``z^i = pi^i w^i u^i`` and
``(p/z)^i = pi^i w^-i u^-i``, every element is ``pi^|i|`` times the unit
multiple ``w^i E_k u^i`` of a series with coefficients in Z/p^N; the family
keeps that factorization.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .arith import to_residue
from .forms import eisenstein, eisenstein_is_p_integral, j_invariant
from .qseries import LaurentSeries, PrecisionError
from .ring import RingContext, RingElement

# residues as listed for the genus-one primes, and their lifts to the zeros
# of E_(p-1):  E_10 = E_4 E_6,  E_16 = E_4 (E_4^3 - j1 Delta),  E_18 = E_6 (E_4^3 - j1 Delta)
_SUPERSINGULAR = {
    11: ((0, 1), (Fraction(0), Fraction(1728))),
    17: ((0, 8), (Fraction(0), Fraction(3456000, 3617))),
    19: ((7, 18), (Fraction(9504000, 43867), Fraction(1728))),
}

LIFTS = ("hasse", "residue")


@dataclass(frozen=True)
class SupersingularPair:
    p: int
    a: int
    b: int
    lift_a: Fraction
    lift_b: Fraction

    def lifts(self, mode: str = "hasse") -> tuple[Fraction, Fraction]:
        if mode == "hasse":
            return self.lift_a, self.lift_b
        if mode == "residue":
            return Fraction(self.a), Fraction(self.b)
        raise ValueError(f"unknown lift mode {mode!r}")


def supersingular_pair(p: int) -> SupersingularPair:
    if p not in _SUPERSINGULAR:
        raise ValueError(f"unsupported prime {p}; X_0(p) has genus one only for 11, 17, 19")
    (a, b), (la, lb) = _SUPERSINGULAR[p]
    return SupersingularPair(p, a, b, la, lb)


def _is_supersingular_j(j: int, p: int) -> bool:
    # a curve with invariant j, then the Hasse invariant:
    # coefficient of x^(p-1) in (x^3 + A x + B)^((p-1)/2)
    if j == 0:
        A, B = 0, 1
    elif j == 1728 % p:
        A, B = 1, 0
    else:
        k = j * pow(1728 - j, -1, p) % p
        A, B = 3 * k % p, 2 * k % p
    poly = [1]
    cubic = [B, A, 0, 1]
    for _ in range((p - 1) // 2):
        out = [0] * (len(poly) + 3)
        for i, x in enumerate(poly):
            for k2, y in enumerate(cubic):
                out[i + k2] = (out[i + k2] + x * y) % p
        poly = out
    return poly[p - 1] % p == 0


def supersingular_j_invariants(p: int) -> list[int]:
    """Brute-force list of supersingular j in F_p via the Hasse invariant."""
    return [j for j in range(p) if _is_supersingular_j(j, p)]


def default_qprec(p: int, d: int) -> int:
    return p * (2 * d + 1) + 2 * d + 8


@dataclass(frozen=True)
class BasisSpec:
    p: int
    weight: int
    d: int
    N: int
    qprec: int | None = None
    lift: str = "hasse"
    swap: bool = False
    unit: int = 1  # c = pi * unit

    def __post_init__(self):
        supersingular_pair(self.p)
        if self.weight != 0 and (self.weight < 4 or self.weight % 2):
            raise ValueError("weight must be 0 or an even integer >= 4")
        if self.d < 1 or self.N < 1:
            raise ValueError("d and N must be positive")
        if self.lift not in LIFTS:
            raise ValueError(f"lift must be one of {LIFTS}")
        if self.unit % self.p == 0:
            raise ValueError("the scaling of c must be a unit")
        if self.qprec is not None and self.qprec < 2 * self.d + 1:
            raise ValueError("qprec too small for the basis size")

    @property
    def size(self) -> int:
        return 2 * self.d + 1

    @property
    def resolved_qprec(self) -> int:
        return self.qprec if self.qprec is not None else default_qprec(self.p, self.d)

    def indices(self) -> list[int]:
        return basis_indices(self.d)

    def with_depth(self, d: int, qprec: int | None = None) -> "BasisSpec":
        return replace(self, d=d, qprec=qprec)


def basis_indices(d: int) -> list[int]:
    out = [0]
    for i in range(1, d + 1):
        out += [i, -i]
    return out


@dataclass
class BasisFamily:
    spec: BasisSpec
    ring: RingContext  # ramified ring at the working precision
    u: LaurentSeries  # over the unramified ring
    eisenstein: LaurentSeries | None
    normalized: list[LaurentSeries]  # w^i E_k u^i, unramified
    pi_grading: list[int]
    scales: list[RingElement]  # w^i
    indices: list[int] = field(default_factory=list)

    def position(self, index: int) -> int:
        return self.indices.index(index)

    def element(self, index: int) -> LaurentSeries:
        """The basis element E_k pi^|i| w^i u^i over the ramified ring."""
        k = self.position(index)
        g = _to_ramified(self.normalized[k], self.ring)
        return g.scale(self.ring.pi_power(self.pi_grading[k]))

    @property
    def elements(self) -> list[LaurentSeries]:
        return [self.element(i) for i in self.indices]

    @property
    def qprec(self) -> int:
        return self.u.qprec


def _to_ramified(f: LaurentSeries, ring: RingContext) -> LaurentSeries:
    if f.ring == ring:
        return f
    return LaurentSeries(ring, f.low, f.coeffs, f.qprec, f.pcoeffs)


def q_times_j(qprec: int, cache=None) -> LaurentSeries:
    """q*j over ZZ through q^(qprec-1), optionally through a SeriesCache."""
    compute = lambda n: j_invariant(n - 1).shift(1)  # noqa: E731
    if cache is None:
        return compute(qprec)
    return cache.get_or_compute("qj", "exact", qprec, compute)


def build_unit_parameter(
    p: int, qprec: int, ring: RingContext, lift: str = "hasse", swap: bool = False, cache=None
) -> LaurentSeries:
    """u = (j - a)/(j - b) reduced into Z/p^N, with constant term 1."""
    if ring.p != p:
        raise ValueError("ring has the wrong prime")
    flat = RingContext(p, ring.N, ramified=False)
    a, b = supersingular_pair(p).lifts(lift)
    if swap:
        a, b = b, a
    if cache is None:
        qj = j_invariant(qprec, flat).shift(1)  # q*j, a unit series
    else:
        qj = q_times_j(qprec + 1, cache).change_ring(flat)
    m = flat.modulus
    q = LaurentSeries.monomial(flat, 1, qj.qprec)
    num = qj - q.scale(to_residue(a, m))
    den = qj - q.scale(to_residue(b, m))
    u = num * den.invert()
    return u.truncate(qprec)


def build_basis(spec: BasisSpec, work_N: int | None = None, cache=None) -> BasisFamily:
    """All 2d+1 basis q-expansions at ``spec.resolved_qprec`` over the ramified ring."""
    N = work_N or spec.N
    p = spec.p
    qprec = spec.resolved_qprec
    if qprec < spec.size:
        raise PrecisionError("qprec too small for the basis size")
    ring = RingContext(p, N, ramified=True)
    flat = RingContext(p, N, ramified=False)
    u = build_unit_parameter(p, qprec, flat, spec.lift, spec.swap, cache)
    uinv = u.invert()
    ek = None
    if spec.weight:
        if not eisenstein_is_p_integral(spec.weight, p):
            raise ValueError(f"E_{spec.weight} is not {p}-integral")
        ek = eisenstein(spec.weight, qprec, flat)
    w = flat(spec.unit)
    winv = w.inverse()
    pos = [LaurentSeries.one(flat, qprec)]
    neg = [pos[0]]
    for _ in range(spec.d):
        pos.append(pos[-1] * u)
        neg.append(neg[-1] * uinv)
    normalized, grading, scales = [], [], []
    for i in basis_indices(spec.d):
        s = w**i if i >= 0 else winv ** (-i)
        g = pos[i] if i >= 0 else neg[-i]
        if ek is not None:
            g = ek * g
        if s != 1:
            g = g.scale(s)
        normalized.append(g)
        grading.append(abs(i))
        scales.append(RingElement(ring, s.a, 0))
    return BasisFamily(spec, ring, u, ek, normalized, grading, scales, basis_indices(spec.d))


def transition_matrix(fam: BasisFamily) -> list[list[int]]:
    """Rows q^0..q^(2d) of the normalized family, as residues mod p^N."""
    n = len(fam.indices)
    return [[g.coeffs[r - g.low] if r >= g.low else 0 for g in fam.normalized] for r in range(n)]
