"""Sparse multivariate polynomials over the rationals, just enough for the solver."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Mapping

Monomial = tuple[str, ...]


def _mul_mon(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


class Poly:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def const(cls, c) -> Poly:
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str) -> Poly:
        return cls({(name,): Fraction(1)})

    @staticmethod
    def lift(x) -> Poly:
        return x if isinstance(x, Poly) else Poly.const(x)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other) -> Poly:
        other = Poly.lift(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) + c
        return Poly(acc)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        return self + (-Poly.lift(other))

    def __rsub__(self, other) -> Poly:
        return Poly.lift(other) - self

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly({m: c * v for m, v in self.terms.items()}) if c else Poly()
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mul_mon(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return Poly(acc)

    __rmul__ = __mul__

    def variables(self) -> set[str]:
        return {v for m in self.terms for v in m}

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def subs(self, values: Mapping[str, Fraction]) -> Poly:
        if not any(v in values for m in self.terms for v in m):
            return self
        acc: dict[Monomial, Fraction] = {}
        for mon, c in self.terms.items():
            rest = []
            for v in mon:
                if v in values:
                    c = c * values[v]
                else:
                    rest.append(v)
            if c:
                key = tuple(rest)
                acc[key] = acc.get(key, 0) + c
        return Poly(acc)

    def substitute(self, name: str, expr: Poly) -> Poly:
        """Replace a variable by a polynomial."""
        if name not in self.variables():
            return self
        out = Poly()
        for mon, c in self.terms.items():
            term = Poly.const(c)
            for v in mon:
                term = term * (expr if v == name else Poly.var(v))
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        rest = self.subs(values)
        if not rest.is_constant():
            raise KeyError(f"unassigned variables {sorted(rest.variables())}")
        return rest.constant()

    def univariate(self, name: str) -> tuple[Fraction, Fraction, Fraction]:
        """Coefficients ``(a, b, c)`` of ``a x^2 + b x + c`` for a polynomial in ``name`` alone."""
        a = b = c = Fraction(0)
        for mon, coef in self.terms.items():
            if mon == ():
                c += coef
            elif mon == (name,):
                b += coef
            elif mon == (name, name):
                a += coef
            else:
                raise ValueError(f"{self} is not univariate quadratic in {name}")
        return a, b, c

    def common_variable(self) -> str | None:
        """A variable dividing every monomial, if any."""
        common = None
        for mon in self.terms:
            s = set(mon)
            common = s if common is None else common & s
            if not common:
                return None
        return min(common) if common else None

    def divide_by(self, name: str) -> Poly:
        acc = {}
        for mon, c in self.terms.items():
            rest = list(mon)
            rest.remove(name)
            acc[tuple(rest)] = c
        return Poly(acc)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{'*'.join(m) or '1'}" for m, c in sorted(self.terms.items()))

    __repr__ = __str__


def rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def rational_roots(a: Fraction, b: Fraction, c: Fraction) -> list[Fraction] | None:
    """Sorted rational roots of ``a x^2 + b x + c``; ``None`` when it vanishes identically."""
    if a == 0:
        if b == 0:
            return None if c == 0 else []
        return [-c / b]
    disc = b * b - 4 * a * c
    r = rational_sqrt(disc)
    if r is None:
        return []
    return sorted({(-b - r) / (2 * a), (-b + r) / (2 * a)})
