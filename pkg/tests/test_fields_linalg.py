from fractions import Fraction

import pytest

from qpmut.fields import QQ, FieldError, PrimeField, field_from_name
from qpmut.linalg import Matrix, Subspace


def test_rationals_basics():
    assert QQ.parse("3/2") == Fraction(3, 2)
    assert QQ.fmt(Fraction(-7, 3)) == "-7/3"
    assert QQ.div(QQ.one, QQ.coerce(4)) == Fraction(1, 4)
    with pytest.raises(FieldError):
        QQ.div(QQ.one, QQ.zero)


def test_prime_field():
    F = PrimeField(7)
    assert F.coerce(10) == 3
    assert F.inv(3) == 5
    assert F.parse("3/2") == F.mul(3, F.inv(2))
    assert F.coerce(Fraction(1, 2)) == 4
    with pytest.raises(FieldError):
        F.inv(0)
    with pytest.raises(FieldError):
        PrimeField(6)


def test_field_from_name():
    assert field_from_name("Q") == QQ
    assert field_from_name("gf(11)") == PrimeField(11)
    with pytest.raises(FieldError):
        field_from_name("R")


def test_rref_and_rank():
    m = Matrix(QQ, [[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    red, pivots = m.rref()
    assert pivots == [0, 1]
    assert m.rank() == 2


def test_nullspace_and_solve():
    m = Matrix(QQ, [[1, 2, 3], [2, 4, 6], [1, 1, 1]])
    for v in m.nullspace():
        assert all(x == 0 for x in m.apply(v))
    sol = m.solve([6, 12, 3])
    assert sol is not None
    assert m.apply(sol) == [Fraction(6), Fraction(12), Fraction(3)]
    assert m.solve([1, 0, 0]) is None   # inconsistent


def test_inverse():
    m = Matrix(QQ, [[2, 1], [1, 1]])
    inv = m.inverse()
    assert m.mul(inv) == Matrix.identity(QQ, 2)
    with pytest.raises(ValueError):
        Matrix(QQ, [[1, 2], [2, 4]]).inverse()


def test_gfp_linear_algebra():
    F = PrimeField(5)
    m = Matrix(F, [[1, 2], [3, 4]])
    assert m.rank() == 2
    inv = m.inverse()
    assert m.mul(inv) == Matrix.identity(F, 2)


def test_subspace_membership_and_complement():
    s = Subspace.from_vectors(QQ, 3, [[1, 0, 1], [0, 1, 1]])
    assert s.dim == 2
    assert s.contains([1, 1, 2])
    assert not s.contains([0, 0, 1])
    comp = s.complement_in([[1, 1, 2], [1, 0, 0]])
    assert len(comp) == 1
    grown = Subspace.from_vectors(QQ, 3, s.basis() + comp)
    assert grown.dim == 3


def test_subspace_coords():
    s = Subspace.from_vectors(QQ, 3, [[1, 0, 0], [1, 1, 0]])
    c = s.coords([3, 2, 0])
    assert c is not None
    assert s.coords([0, 0, 1]) is None
