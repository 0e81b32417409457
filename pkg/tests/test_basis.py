from __future__ import annotations

from fractions import Fraction

import pytest

from upslopes.basis import (
    BasisSpec,
    build_basis,
    build_unit_parameter,
    default_qprec,
    supersingular_j_invariants,
    supersingular_pair,
    transition_matrix,
)
from upslopes.forms import delta, eisenstein
from upslopes.qseries import QQ, LaurentSeries, series_invert
from upslopes.ring import RingContext
from upslopes.spectral import berkowitz
from upslopes.upmatrix import solve_mod


@pytest.mark.parametrize("p,pair", [(11, (0, 1)), (17, (0, 8)), (19, (7, 18))])
def test_supersingular_residues(p, pair):
    s = supersingular_pair(p)
    assert (s.a, s.b) == pair
    assert supersingular_j_invariants(p) == list(pair)


@pytest.mark.parametrize("p", [11, 17, 19])
def test_lifts_reduce_to_residues(p):
    s = supersingular_pair(p)
    for lift, res in zip(s.lifts("hasse"), (s.a, s.b)):
        assert (lift.numerator - res * lift.denominator) % p == 0
    assert s.lifts("residue") == (Fraction(s.a), Fraction(s.b))
    with pytest.raises(ValueError):
        s.lifts("other")


def _qq(f):
    return LaurentSeries(QQ, f.low, f.coeffs, f.qprec)


def test_hasse_lifts_are_zeros_of_eisenstein():
    # E_16 = E_4 (E_4^3 - j1 Delta) and E_18 = E_6 (E_4^3 - j1 Delta)
    n = 30
    e4, e6 = _qq(eisenstein(4, n)), _qq(eisenstein(6, n))
    dl = _qq(delta(n))
    j1 = supersingular_pair(17).lift_b
    assert eisenstein(16, n) == e4 * (e4 * e4 * e4 - dl.scale(j1))
    j1 = supersingular_pair(19).lift_a
    assert eisenstein(18, n) == e6 * (e4 * e4 * e4 - dl.scale(j1))
    # E_10 = E_4 E_6 vanishes at j = 0 and j = 1728
    assert eisenstein(10, n) == eisenstein(4, n) * eisenstein(6, n)
    assert supersingular_pair(11).lifts() == (0, 1728)


def test_unsupported_prime():
    with pytest.raises(ValueError):
        supersingular_pair(13)


@pytest.mark.parametrize("p", [11, 17, 19])
@pytest.mark.parametrize("lift", ["hasse", "residue"])
def test_unit_parameter(p, lift):
    ring = RingContext(p, 6, ramified=False)
    u = build_unit_parameter(p, 40, ring, lift)
    s = supersingular_pair(p)
    assert u.low == 0 and u.coeffs[0] == 1
    assert u.coeffs[1] % p == (s.b - s.a) % p
    assert u * series_invert(u) == LaurentSeries.one(ring, 40)


def test_unit_parameter_p19_linear_coefficient():
    u = build_unit_parameter(19, 10, RingContext(19, 4, ramified=False))
    assert u.coeffs[1] % 19 == 11


def test_spec_validation():
    with pytest.raises(ValueError):
        BasisSpec(11, 3, 2, 5)
    with pytest.raises(ValueError):
        BasisSpec(11, 0, 0, 5)
    with pytest.raises(ValueError):
        BasisSpec(11, 0, 2, 5, unit=22)
    assert BasisSpec(11, 0, 2, 5).indices() == [0, 1, -1, 2, -2]
    assert BasisSpec(11, 0, 2, 5).resolved_qprec == default_qprec(11, 2) == 11 * 5 + 12


def test_weight_zero_family():
    fam = build_basis(BasisSpec(11, 0, 3, 6, qprec=80))
    ring = fam.ring
    assert fam.element(0) == LaurentSeries.one(ring, 80)
    # z * (p/z) = p
    assert fam.element(1) * fam.element(-1) == LaurentSeries.one(ring, 80).scale(ring(11))
    assert fam.pi_grading == [0, 1, 1, 2, 2, 3, 3]


def test_weight_four_family_p17():
    spec = BasisSpec(17, 4, 6, 5, qprec=120)
    fam = build_basis(spec)
    assert len(fam.elements) == 13
    e4 = eisenstein(4, 120, RingContext(17, 5, ramified=False))
    assert fam.normalized[0] == e4
    ring = fam.ring
    lhs = fam.element(1) * fam.element(-1)
    rhs = (e4 * e4).change_ring(ring).scale(ring(17))
    assert LaurentSeries(ring, 0, lhs.coeffs, 120, lhs.pcoeffs) == rhs


@pytest.mark.parametrize("p", [11, 17, 19])
def test_reconstruction_identity(p):
    spec = BasisSpec(p, 0, 3, 5, qprec=60, unit=3)
    fam = build_basis(spec)
    ring = fam.ring
    u = fam.u
    c = ring(0, 3)  # pi * 3
    for i in fam.indices:
        power = u ** abs(i) if i >= 0 else series_invert(u) ** abs(i)
        base = LaurentSeries(ring, 0, power.coeffs, 60)
        if i >= 0:
            expected = base.scale(c**i)
        else:
            # (p/z)^|i| = (p / (c u))^|i| = pi^|i| * 3^-|i| * u^-|i|
            expected = base.scale(ring.pi_power(-i) * ring(3).inverse() ** (-i))
        assert fam.element(i) == expected


@pytest.mark.parametrize("p,k", [(11, 0), (17, 4), (19, 0)])
def test_transition_determinant_is_unit(p, k):
    fam = build_basis(BasisSpec(p, k, 4, 5, qprec=60))
    A = transition_matrix(fam)
    ring = RingContext(p, 5, ramified=False)
    det = berkowitz([[ring(x) for x in row] for row in A], ring)[-1]
    assert det.is_unit()
    # and the solver inverts it without a non-unit pivot
    assert solve_mod(A, [[1] + [0] * 8], p, 5)


def test_qprec_too_small():
    with pytest.raises(ValueError):
        BasisSpec(11, 0, 4, 5, qprec=5)
