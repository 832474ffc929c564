from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from rotabaxter.polynomials import Poly, rational_roots, rational_sqrt

x, y = Poly.var("x"), Poly.var("y")


def test_arithmetic():
    p = (x + 1) * (x - 1)
    assert p == x * x - 1
    assert p.degree() == 2
    assert p.univariate("x") == (1, 0, -1)
    assert p.evaluate({"x": Fraction(3)}) == 8


def test_substitution():
    p = x * y + y
    assert p.subs({"y": Fraction(2)}) == 2 * x + 2
    assert p.substitute("x", y) == y * y + y
    assert p.common_variable() == "y"
    assert p.divide_by("y") == x + 1


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(-1)) is None


def test_roots_degenerate():
    assert rational_roots(Fraction(0), Fraction(0), Fraction(0)) is None
    assert rational_roots(Fraction(0), Fraction(0), Fraction(1)) == []
    assert rational_roots(Fraction(1), Fraction(0), Fraction(-2)) == []


fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(fracs, fracs, st.fractions(min_value=1, max_value=3, max_denominator=3))
def test_roots_recovered(r, s, a):
    p = a * (x - r) * (x - s)
    roots = rational_roots(*p.univariate("x"))
    assert roots == sorted({r, s})
