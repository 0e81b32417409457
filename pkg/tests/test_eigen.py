from __future__ import annotations

import pytest

from upslopes.basis import BasisSpec
from upslopes.eigen import (
    InsufficientPrecision,
    SlopeNotSimple,
    basis_vector,
    cuspidal_eigenvector,
    noncuspidal_fixed_vector,
    power_iterate,
    random_start,
)
from upslopes.ring import RingContext
from upslopes.spectral import char_series, newton_slopes
from upslopes.upmatrix import up_matrix

R = RingContext(11, 8)


def test_diagonal():
    M = [[R(1), R(0)], [R(0), R(11)]]
    res = power_iterate(M, [R(1), R(1)], 12)
    assert res.eigenvalue == R.one()
    assert res.coordinates == [R(1), R(0)]
    assert res.precision == 8


def test_upper_triangular_closed_form():
    M = [[R(1), R(1)], [R(0), R(11)]]
    res = power_iterate(M, [R(1), R(1)], 12)
    assert res.eigenvalue == R.one()
    assert res.coordinates == [R(1), R(0)]


def test_positive_slope_target_rejected():
    M = [[R(11), R(0)], [R(0), R(121)]]
    with pytest.raises(InsufficientPrecision):
        power_iterate(M, [R(1), R(1)], 3)


def test_two_unit_eigenvalues_not_simple():
    M = [[R(1), R(0)], [R(0), R(2)]]
    with pytest.raises(SlopeNotSimple):
        power_iterate(M, [R(1), R(1)], 5)


def test_steps_must_be_positive():
    with pytest.raises(ValueError):
        power_iterate([[R(1)]], [R(1)], 0)


@pytest.fixture(scope="module")
def m19():
    return up_matrix(BasisSpec(19, 0, 6, 9))


def test_fixed_vector(m19):
    f = noncuspidal_fixed_vector(m19)
    assert f.coordinates[0].is_unit()
    assert f.eigenvalue.is_unit()
    assert f.normalizing_index == 0


def test_fixed_vector_needs_weight_zero():
    with pytest.raises(ValueError):
        noncuspidal_fixed_vector(up_matrix(BasisSpec(17, 4, 2, 5)))


def _residual_ok(M, res):
    v, lam = res.coordinates, res.eigenvalue
    mv = M.apply(v)
    for a, b in zip(mv, v):
        d = (a - lam * b).valuation()
        assert d.bound or d.twice >= 2 * res.precision


def test_cuspidal_eigenvector(m19):
    res = cuspidal_eigenvector(m19, 12)
    assert res.eigenvalue.is_unit()
    assert res.precision == 9
    assert res.coordinates[res.normalizing_index] == m19.ring.one()
    _residual_ok(m19, res)
    # slope consistency with the cuspidal Newton polygon
    assert newton_slopes(char_series(m19)).cuspidal().certain()[0] == res.slope == 0


def test_start_vector_independence(m19):
    ring = m19.ring
    a = cuspidal_eigenvector(m19, 14, seed=1)
    b = cuspidal_eigenvector(m19, 14, seed=2)
    c = cuspidal_eigenvector(m19, 14)
    assert a.eigenvalue == b.eigenvalue == c.eigenvalue
    prec = min(a.precision, b.precision, c.precision)
    k = a.normalizing_index
    for r in (b, c):
        s = r.coordinates[k].inverse()
        assert [(x * s).reduce(prec) for x in r.coordinates] == [x.reduce(prec) for x in a.coordinates]
    assert a.seed == 1 and random_start(ring, 3, 5) == random_start(ring, 3, 5)


def test_json_shape(m19):
    doc = cuspidal_eigenvector(m19, 10).to_json()
    assert set(doc) >= {"coordinates", "eigenvalue", "slope", "guaranteed_precision", "iterations"}
    assert doc["indices"][:3] == ["0", "1", "-1"]
    assert basis_vector(m19.ring, 3, 1)[1] == m19.ring.one()
