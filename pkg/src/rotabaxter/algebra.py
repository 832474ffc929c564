"""Witt and Virasoro algebras and their semidirect products with the dual spaces.

Everything here is exact.  Scalars are :class:`fractions.Fraction`, elements
are finitely supported maps from basis symbols to scalars kept in a canonical
form (no zero coefficients, sorted support), so ``==`` is structural.

Basis symbols come in four kinds::

    L(n)   Witt generator, degree n
    C      central element, degree 0
    Ld(n)  dual functional L_n^*, degree -n
    Cd     dual functional C^*, degree 0

The canonical order is primal ascending, then ``C``, then dual ascending,
then ``Cd``.
"""

from __future__ import annotations

import enum
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

Scalar = Fraction
ScalarLike = Union[int, Fraction, str]


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class WindowError(DomainError):
    """An evaluation needed an index outside the finite window it was given."""


def scalar(value: ScalarLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"malformed rational: {value!r}") from exc
    raise DomainError(f"not a rational: {value!r}")


def format_scalar(value: Fraction) -> str:
    return str(value)


class Kind(enum.IntEnum):
    WITT = 0
    CENTER = 1
    DUAL_WITT = 2
    DUAL_CENTER = 3


_KIND_NAMES = {Kind.WITT: "L", Kind.CENTER: "C", Kind.DUAL_WITT: "Ld", Kind.DUAL_CENTER: "Cd"}
_NAME_KINDS = {v: k for k, v in _KIND_NAMES.items()}


class BasisSymbol(NamedTuple):
    kind: Kind
    index: int = 0

    @property
    def degree(self) -> int:
        if self.kind is Kind.WITT:
            return self.index
        if self.kind is Kind.DUAL_WITT:
            return -self.index
        return 0

    @property
    def is_dual(self) -> bool:
        return self.kind >= Kind.DUAL_WITT

    def dual(self) -> BasisSymbol:
        """The symbol paired with this one by the duality pairing."""
        return BasisSymbol(Kind((self.kind + 2) % 4), self.index)

    def __str__(self) -> str:
        name = _KIND_NAMES[self.kind]
        if self.kind in (Kind.WITT, Kind.DUAL_WITT):
            return f"{name}({self.index})"
        return name

    __repr__ = __str__


def L(n: int) -> BasisSymbol:
    return BasisSymbol(Kind.WITT, n)


def Ld(n: int) -> BasisSymbol:
    return BasisSymbol(Kind.DUAL_WITT, n)


C = BasisSymbol(Kind.CENTER, 0)
Cd = BasisSymbol(Kind.DUAL_CENTER, 0)

_SYMBOL_RE = re.compile(r"^\s*(Ld|L|Cd|C)\s*(?:\(\s*(-?\d+)\s*\))?\s*$")


def parse_symbol(text: str) -> BasisSymbol:
    match = _SYMBOL_RE.match(text)
    if not match:
        raise DomainError(f"malformed basis symbol: {text!r}")
    kind = _NAME_KINDS[match.group(1)]
    index = match.group(2)
    if kind in (Kind.WITT, Kind.DUAL_WITT):
        if index is None:
            raise DomainError(f"{text!r} needs an index")
        return BasisSymbol(kind, int(index))
    if index is not None:
        raise DomainError(f"{text!r} takes no index")
    return BasisSymbol(kind, 0)


class Signature(enum.Enum):
    WITT = "witt"
    VIRASORO = "virasoro"
    WITT_SEMIDIRECT = "witt_semidirect"
    VIRASORO_SEMIDIRECT = "virasoro_semidirect"

    @property
    def has_center(self) -> bool:
        return self in (Signature.VIRASORO, Signature.VIRASORO_SEMIDIRECT)

    @property
    def is_semidirect(self) -> bool:
        return self in (Signature.WITT_SEMIDIRECT, Signature.VIRASORO_SEMIDIRECT)

    @property
    def base(self) -> Signature:
        return Signature.VIRASORO if self.has_center else Signature.WITT

    @property
    def semidirect(self) -> Signature:
        return Signature.VIRASORO_SEMIDIRECT if self.has_center else Signature.WITT_SEMIDIRECT

    def admits(self, sym: BasisSymbol) -> bool:
        if sym.kind in (Kind.CENTER, Kind.DUAL_CENTER) and not self.has_center:
            return False
        if sym.is_dual and not self.is_semidirect:
            return False
        return True

    def window(self, n: int) -> list[BasisSymbol]:
        """All legal basis symbols with index in ``[-n, n]``, canonically ordered."""
        out = [L(m) for m in range(-n, n + 1)]
        if self.has_center:
            out.append(C)
        if self.is_semidirect:
            out.extend(Ld(m) for m in range(-n, n + 1))
            if self.has_center:
                out.append(Cd)
        return out


def check_symbol(sig: Signature, sym: BasisSymbol) -> None:
    if not sig.admits(sym):
        raise DomainError(f"{sym} is not a basis symbol of {sig.value}")


class Element:
    """An exact finite linear combination of basis symbols."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[BasisSymbol, ScalarLike] | Iterable[tuple[BasisSymbol, ScalarLike]] = ()):
        acc: dict[BasisSymbol, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for sym, coef in items:
            if not isinstance(sym, BasisSymbol):
                raise DomainError(f"not a basis symbol: {sym!r}")
            acc[sym] = acc.get(sym, Fraction(0)) + scalar(coef)
        self._terms = {s: c for s, c in sorted(acc.items()) if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[BasisSymbol, Fraction]) -> Element:
        out = object.__new__(cls)
        out._terms = {s: c for s, c in sorted(terms.items()) if c}
        out._hash = None
        return out

    @classmethod
    def basis(cls, sym: BasisSymbol, coef: ScalarLike = 1) -> Element:
        return cls._raw({sym: scalar(coef)})

    def coefficient(self, sym: BasisSymbol) -> Fraction:
        return self._terms.get(sym, Fraction(0))

    def items(self):
        return self._terms.items()

    def support(self) -> tuple[BasisSymbol, ...]:
        return tuple(self._terms)

    def degrees(self) -> set[int]:
        return {s.degree for s in self._terms}

    def __iter__(self) -> Iterator[tuple[BasisSymbol, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Element):
            return self._terms == other._terms
        if isinstance(other, int) and other == 0:
            return not self._terms
        if isinstance(other, BasisSymbol):
            return self._terms == {other: 1}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other: Element | BasisSymbol) -> Element:
        other = as_element(other)
        acc = dict(self._terms)
        for s, c in other._terms.items():
            acc[s] = acc.get(s, 0) + c
        return Element._raw(acc)

    __radd__ = __add__

    def __neg__(self) -> Element:
        return Element._raw({s: -c for s, c in self._terms.items()})

    def __sub__(self, other: Element | BasisSymbol) -> Element:
        return self + (-as_element(other))

    def __rsub__(self, other: Element | BasisSymbol) -> Element:
        return as_element(other) - self

    def __mul__(self, c: ScalarLike) -> Element:
        c = scalar(c)
        if not c:
            return ZERO
        return Element._raw({s: c * v for s, v in self._terms.items()})

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for sym, coef in self._terms.items():
            sign = "-" if coef < 0 else "+"
            parts.append((sign, f"{abs(coef)}*{sym}"))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Element({str(self)!r})"


ZERO = Element()


def as_element(x: Element | BasisSymbol) -> Element:
    if isinstance(x, Element):
        return x
    if isinstance(x, BasisSymbol):
        return Element.basis(x)
    if isinstance(x, int) and x == 0:
        return ZERO
    raise DomainError(f"not an element: {x!r}")


_TERM_RE = re.compile(r"([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?((?:Ld|L)\s*\(\s*-?\d+\s*\)|Cd|C)")


def parse_element(text: str) -> Element:
    """Inverse of ``str(Element)``; also accepts bare symbols like ``L(3)``."""
    stripped = text.strip()
    if stripped == "0":
        return ZERO
    acc: dict[BasisSymbol, Fraction] = {}
    pos = 0
    body = stripped
    while pos < len(body):
        while pos < len(body) and body[pos].isspace():
            pos += 1
        if pos >= len(body):
            break
        match = _TERM_RE.match(body, pos)
        if not match or (pos > 0 and not match.group(1)):
            raise DomainError(f"malformed element: {text!r}")
        sign = -1 if match.group(1) == "-" else 1
        coef = Fraction(match.group(2)) if match.group(2) else Fraction(1)
        sym = parse_symbol(match.group(3))
        acc[sym] = acc.get(sym, Fraction(0)) + sign * coef
        pos = match.end()
    return Element._raw(acc)


def cocycle(m: int, n: int) -> Fraction:
    """The Virasoro 2-cocycle coefficient of C in [L_m, L_n]."""
    if m + n != 0:
        return Fraction(0)
    return Fraction(m**3 - m, 12)


@lru_cache(maxsize=1 << 16)
def structure_bracket(sig: Signature, i: BasisSymbol, j: BasisSymbol) -> Element:
    check_symbol(sig, i)
    check_symbol(sig, j)
    if i.is_dual and j.is_dual:
        return ZERO
    if i.is_dual:
        return -structure_bracket(sig, j, i)
    if i.kind is Kind.CENTER:
        return ZERO
    m = i.index
    if j.kind is Kind.WITT:
        n = j.index
        terms = {L(m + n): Fraction(m - n)}
        if sig.has_center and m + n == 0:
            terms[C] = cocycle(m, n)
        return Element._raw(terms)
    if j.kind is Kind.DUAL_WITT:
        n = j.index
        return Element._raw({Ld(n - m): Fraction(n - 2 * m)})
    if j.kind is Kind.DUAL_CENTER:
        return Element._raw({Ld(-m): -Fraction(m**3 - m, 12)})
    return ZERO


def bracket(sig: Signature, x: Element | BasisSymbol, y: Element | BasisSymbol) -> Element:
    x, y = as_element(x), as_element(y)
    acc: dict[BasisSymbol, Fraction] = {}
    for s, a in x._terms.items():
        for t, b in y._terms.items():
            for u, c in structure_bracket(sig, s, t)._terms.items():
                acc[u] = acc.get(u, 0) + a * b * c
    return Element._raw(acc)


def jacobi_defect(sig: Signature, x, y, z) -> Element:
    return (
        bracket(sig, bracket(sig, x, y), z)
        + bracket(sig, bracket(sig, y, z), x)
        + bracket(sig, bracket(sig, z, x), y)
    )
