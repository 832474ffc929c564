from fractions import Fraction

import pytest

from rotabaxter.algebra import DomainError
from rotabaxter.indexsets import (
    CoefForm,
    Everything,
    Finite,
    Ray,
    Residue,
    avoids_pole,
    coef_from_str,
    index_set_from_json,
)


def test_membership():
    assert list(Residue(-1, 2).within(-3, 3)) == [-3, -1, 1, 3]
    assert list(Ray("geq", 2).within(0, 4)) == [2, 3, 4]
    assert list(Ray("lt", -1).within(-3, 0)) == [-3, -2]
    assert list(Finite((3, 1, 1)).within(-5, 5)) == [1, 3]
    assert 10**9 in Everything()


def test_residue_normalizes():
    assert Residue(5, -3) == Residue(2, 3)
    with pytest.raises(DomainError):
        Residue(0, 0)


@pytest.mark.parametrize("s", [Finite((0, 2)), Residue(1, 4), Ray("leq", 1), Ray("gt", -2), Everything()])
def test_shift_and_json(s):
    shifted = s.shift(3)
    assert list(shifted.within(-8, 8)) == [m + 3 for m in s.within(-11, 5)]
    assert index_set_from_json(s.to_json()) == s


def test_finiteness():
    assert Finite((1,)).is_finite
    assert not Residue(0, 2).is_finite


def test_coef_form():
    c = CoefForm(Fraction(1), 1, 2)
    assert c(1) == Fraction(1, 3)
    assert c.pole() == -2
    assert c.shift(1)(0) == c(1)
    assert c.scaled(3)(1) == 1
    with pytest.raises(DomainError):
        c(-2)
    assert CoefForm(4, 0, 2) == CoefForm.const(2)


@pytest.mark.parametrize("form", [CoefForm(Fraction(1), 1, 2), CoefForm(Fraction(-3, 2), -1, 0), CoefForm.const("5/7")])
def test_coef_str_roundtrip(form):
    assert coef_from_str(str(form)) == form


def test_avoids_pole():
    c = CoefForm(Fraction(1), 1, 2)
    assert avoids_pole(Residue(1, 2), c)
    assert not avoids_pole(Residue(0, 2), c)
    assert avoids_pole(Everything(), CoefForm(Fraction(1), 2, 1))
