"""Integer index sets and rational coefficient forms shared by operators and tensors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .algebra import DomainError


class IndexSet:
    """A subset of the integers with a closed-form description."""

    def __contains__(self, m: int) -> bool:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False

    def shift(self, d: int) -> IndexSet:
        raise NotImplementedError

    def within(self, lo: int, hi: int) -> Iterator[int]:
        return (m for m in range(lo, hi + 1) if m in self)

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Finite(IndexSet):
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(set(self.elements))))

    def __contains__(self, m: int) -> bool:
        return m in self.elements

    def __iter__(self):
        return iter(self.elements)

    @property
    def is_finite(self) -> bool:
        return True

    def shift(self, d: int) -> Finite:
        return Finite(tuple(e + d for e in self.elements))

    def to_json(self) -> dict:
        return {"kind": "finite", "elements": list(self.elements)}


@dataclass(frozen=True)
class Residue(IndexSet):
    """The class ``a + l*Z`` with ``l > 0``."""

    a: int
    l: int

    def __post_init__(self):
        if self.l == 0:
            raise DomainError("modulus must be nonzero")
        l = abs(self.l)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "a", self.a % l)

    def __contains__(self, m: int) -> bool:
        return (m - self.a) % self.l == 0

    def shift(self, d: int) -> Residue:
        return Residue(self.a + d, self.l)

    def to_json(self) -> dict:
        return {"kind": "mod", "a": self.a, "l": self.l}


_RAY_TESTS = {
    "geq": lambda m, a: m >= a,
    "leq": lambda m, a: m <= a,
    "gt": lambda m, a: m > a,
    "lt": lambda m, a: m < a,
}


@dataclass(frozen=True)
class Ray(IndexSet):
    """A threshold set such as ``{m >= a}``."""

    op: str
    a: int

    def __post_init__(self):
        if self.op not in _RAY_TESTS:
            raise DomainError(f"unknown threshold kind {self.op!r}")

    def __contains__(self, m: int) -> bool:
        return _RAY_TESTS[self.op](m, self.a)

    def shift(self, d: int) -> Ray:
        return Ray(self.op, self.a + d)

    def to_json(self) -> dict:
        return {"kind": self.op, "a": self.a}


@dataclass(frozen=True)
class Everything(IndexSet):
    def __contains__(self, m: int) -> bool:
        return True

    def shift(self, d: int) -> Everything:
        return self

    def to_json(self) -> dict:
        return {"kind": "all"}


def index_set_from_json(obj: dict) -> IndexSet:
    kind = obj.get("kind")
    if kind == "finite":
        return Finite(tuple(int(e) for e in obj["elements"]))
    if kind == "mod":
        return Residue(int(obj["a"]), int(obj["l"]))
    if kind in _RAY_TESTS:
        return Ray(kind, int(obj["a"]))
    if kind == "all":
        return Everything()
    raise DomainError(f"unknown index set {obj!r}")


@dataclass(frozen=True)
class CoefForm:
    """``m -> num / (a*m + b)``; ``a == 0`` is a constant."""

    num: Fraction
    a: int = 0
    b: int = 1

    def __post_init__(self):
        num = Fraction(self.num)
        if self.a == 0:
            if self.b == 0:
                raise DomainError("zero denominator")
            num, b = num / self.b, 1
            object.__setattr__(self, "b", b)
        object.__setattr__(self, "num", num)

    @classmethod
    def const(cls, value) -> CoefForm:
        return cls(Fraction(value))

    @property
    def is_constant(self) -> bool:
        return self.a == 0

    def pole(self) -> Fraction | None:
        if self.a == 0:
            return None
        return Fraction(-self.b, self.a)

    def __call__(self, m: int) -> Fraction:
        den = self.a * m + self.b
        if den == 0:
            raise DomainError(f"coefficient {self} has a pole at m={m}")
        return self.num / den

    def shift(self, d: int) -> CoefForm:
        """The form ``m -> self(m + d)``."""
        return CoefForm(self.num, self.a, self.a * d + self.b)

    def scaled(self, c) -> CoefForm:
        return CoefForm(self.num * c, self.a, self.b)

    def __str__(self) -> str:
        if self.a == 0:
            return str(self.num)
        lin = "m" if self.a == 1 else ("-m" if self.a == -1 else f"{self.a}*m")
        if self.b:
            lin += f"{self.b:+d}"
        return f"{self.num}/({lin})"


def coef_from_str(text: str) -> CoefForm:
    import re

    text = text.strip()
    match = re.fullmatch(r"(-?\d+(?:/\d+)?)/\((-?\d*)\*?(-?)m([+-]\d+)?\)", text)
    if match:
        num = Fraction(match.group(1))
        coeff = match.group(2)
        if coeff in ("", "-"):
            a = -1 if coeff == "-" else 1
        else:
            a = int(coeff)
        if match.group(3) == "-":
            a = -a
        b = int(match.group(4) or 0)
        return CoefForm(num, a, b)
    try:
        return CoefForm(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"malformed coefficient {text!r}") from exc


def avoids_pole(s: IndexSet, coef: CoefForm) -> bool:
    pole = coef.pole()
    if pole is None or pole.denominator != 1:
        return True
    return int(pole) not in s
