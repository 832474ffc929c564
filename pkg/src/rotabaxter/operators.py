"""Homogeneous linear operators on the Witt and Virasoro algebras.

An operator of degree ``k`` is determined by a coefficient function ``f`` and,
on the Virasoro algebra, three scalars::

    R(L_m) = f(m+k) L_{m+k} + theta * delta_{m+k,0} C
    R(C)   = mu L_k + nu * delta_{k,0} C

Coefficient functions are closed forms that evaluate on every integer, except
:class:`Table`, which only knows a finite window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .algebra import (
    ZERO,
    BasisSymbol,
    C,
    DomainError,
    Element,
    Kind,
    L,
    Signature,
    WindowError,
    as_element,
    bracket,
    check_symbol,
    cocycle,
    scalar,
)
from .indexsets import CoefForm, Everything, Finite, IndexSet, Ray, Residue

Piece = tuple[IndexSet, CoefForm]


class CoefficientFunction:
    """Base class; subclasses are frozen dataclasses and callable on integers."""

    def __call__(self, m: int) -> Fraction:
        raise NotImplementedError

    def pieces(self) -> list[Piece]:
        """Disjoint-or-additive closed-form pieces: ``f(m) = sum of c(m) over pieces containing m``."""
        raise DomainError(f"{type(self).__name__} has no closed form")

    def scaled(self, c: Fraction) -> CoefficientFunction:
        c = scalar(c)
        if c == 1:
            return self
        if c == 0:
            return Zero()
        return Affine(self, c, Fraction(0))

    def companion(self) -> CoefficientFunction:
        """Coefficients of ``-R - Id`` at degree 0."""
        return Affine(self, Fraction(-1), Fraction(-1))


@dataclass(frozen=True)
class Zero(CoefficientFunction):
    def __call__(self, m: int) -> Fraction:
        return Fraction(0)

    def pieces(self) -> list[Piece]:
        return []

    def scaled(self, c) -> CoefficientFunction:
        return self

    def companion(self) -> CoefficientFunction:
        return StepSign("empty")


@dataclass(frozen=True)
class DeltaAt(CoefficientFunction):
    target: int
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", scalar(self.value))

    def __call__(self, m: int) -> Fraction:
        return self.value if m == self.target else Fraction(0)

    def pieces(self) -> list[Piece]:
        return [(Finite((self.target,)), CoefForm.const(self.value))] if self.value else []

    def scaled(self, c) -> CoefficientFunction:
        return DeltaAt(self.target, self.value * scalar(c))


@dataclass(frozen=True)
class DoubleDelta(CoefficientFunction):
    """``value`` at ``a`` plus ``2*value`` at ``b``."""

    a: int
    b: int
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", scalar(self.value))

    def __call__(self, m: int) -> Fraction:
        out = Fraction(0)
        if m == self.a:
            out += self.value
        if m == self.b:
            out += 2 * self.value
        return out

    def pieces(self) -> list[Piece]:
        if not self.value:
            return []
        return [
            (Finite((self.a,)), CoefForm.const(self.value)),
            (Finite((self.b,)), CoefForm.const(2 * self.value)),
        ]

    def scaled(self, c) -> CoefficientFunction:
        return DoubleDelta(self.a, self.b, self.value * scalar(c))


@dataclass(frozen=True)
class CongruenceRational(CoefficientFunction):
    """``k/(m+k) * value`` on ``l*Z`` and zero elsewhere."""

    k: int
    l: int
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", scalar(self.value))
        if self.l == 0:
            raise DomainError("l must be nonzero")
        if self.k % self.l == 0:
            raise DomainError(f"l={self.l} divides k={self.k}")

    def __call__(self, m: int) -> Fraction:
        if m % self.l:
            return Fraction(0)
        return Fraction(self.k, m + self.k) * self.value

    def pieces(self) -> list[Piece]:
        if not self.value:
            return []
        return [(Residue(0, self.l), CoefForm(self.k * self.value, 1, self.k))]

    def scaled(self, c) -> CoefficientFunction:
        return CongruenceRational(self.k, self.l, self.value * scalar(c))


# (zero set, value off the zero set); sign-split variants also carry f(0)
_STEP_VARIANTS = ("le1", "ge-1", "gt1", "lt-1", "empty", "plus", "minus")
_STEP_COMPANION = {"le1": "gt1", "gt1": "le1", "ge-1": "lt-1", "lt-1": "ge-1", "plus": "minus", "minus": "plus"}


@dataclass(frozen=True)
class StepSign(CoefficientFunction):
    """The weight-one shapes: ``f`` takes values 0 and -1 off the origin."""

    variant: str
    alpha: Fraction = Fraction(0)

    def __post_init__(self):
        if self.variant not in _STEP_VARIANTS:
            raise DomainError(f"unknown step variant {self.variant!r}")
        alpha = scalar(self.alpha)
        if self.variant not in ("plus", "minus") and alpha:
            raise DomainError(f"variant {self.variant!r} has no free value at 0")
        object.__setattr__(self, "alpha", alpha)

    def __call__(self, m: int) -> Fraction:
        v = self.variant
        if v == "le1":
            hit = m >= 2
        elif v == "ge-1":
            hit = m <= -2
        elif v == "gt1":
            hit = m <= 1
        elif v == "lt-1":
            hit = m >= -1
        elif v == "empty":
            hit = True
        else:
            if m == 0:
                return self.alpha
            hit = m < 0 if v == "plus" else m > 0
        return Fraction(-1) if hit else Fraction(0)

    def pieces(self) -> list[Piece]:
        minus_one = CoefForm.const(-1)
        v = self.variant
        if v == "le1":
            return [(Ray("geq", 2), minus_one)]
        if v == "ge-1":
            return [(Ray("leq", -2), minus_one)]
        if v == "gt1":
            return [(Ray("leq", 1), minus_one)]
        if v == "lt-1":
            return [(Ray("geq", -1), minus_one)]
        if v == "empty":
            return [(Everything(), minus_one)]
        out = [(Ray("lt" if v == "plus" else "gt", 0), minus_one)]
        if self.alpha:
            out.append((Finite((0,)), CoefForm.const(self.alpha)))
        return out

    def companion(self) -> CoefficientFunction:
        if self.variant == "empty":
            return Zero()
        return StepSign(_STEP_COMPANION[self.variant], -self.alpha - 1 if self.variant in ("plus", "minus") else 0)


@dataclass(frozen=True)
class Affine(CoefficientFunction):
    """``scale * base(m) + shift``."""

    base: CoefficientFunction
    scale: Fraction
    shift: Fraction

    def __post_init__(self):
        object.__setattr__(self, "scale", scalar(self.scale))
        object.__setattr__(self, "shift", scalar(self.shift))
        if isinstance(self.base, Affine):
            inner = self.base
            object.__setattr__(self, "base", inner.base)
            object.__setattr__(self, "shift", self.scale * inner.shift + self.shift)
            object.__setattr__(self, "scale", self.scale * inner.scale)

    def __call__(self, m: int) -> Fraction:
        return self.scale * self.base(m) + self.shift

    def pieces(self) -> list[Piece]:
        out = [(s, c.scaled(self.scale)) for s, c in self.base.pieces()] if self.scale else []
        if self.shift:
            out.append((Everything(), CoefForm.const(self.shift)))
        return out

    def companion(self) -> CoefficientFunction:
        scale, shift = -self.scale, -self.shift - 1
        if scale == 1 and shift == 0:
            return self.base
        return Affine(self.base, scale, shift)


@dataclass(frozen=True)
class Table(CoefficientFunction):
    """Explicit values on ``[-window, window]``; evaluation elsewhere raises :class:`WindowError`."""

    window: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(scalar(v) for v in self.values)
        if len(values) != 2 * self.window + 1:
            raise DomainError(f"table for window {self.window} needs {2 * self.window + 1} values")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_mapping(cls, window: int, mapping) -> Table:
        return cls(window, tuple(mapping.get(m, 0) for m in range(-window, window + 1)))

    @classmethod
    def constant(cls, window: int, value) -> Table:
        return cls(window, (value,) * (2 * window + 1))

    def __call__(self, m: int) -> Fraction:
        if not -self.window <= m <= self.window:
            raise WindowError(f"table evaluated at {m}, outside [-{self.window}, {self.window}]")
        return self.values[m + self.window]

    def scaled(self, c) -> CoefficientFunction:
        c = scalar(c)
        return Table(self.window, tuple(c * v for v in self.values))

    def companion(self) -> CoefficientFunction:
        return Table(self.window, tuple(-v - 1 for v in self.values))


@dataclass(frozen=True)
class HomogeneousOperator:
    sig: Signature
    degree: int
    f: CoefficientFunction = field(default_factory=Zero)
    theta: Fraction = Fraction(0)
    mu: Fraction = Fraction(0)
    nu: Fraction = Fraction(0)

    def __post_init__(self):
        if self.sig.is_semidirect:
            raise DomainError("operators act on the Witt or Virasoro algebra")
        for name in ("theta", "mu", "nu"):
            object.__setattr__(self, name, scalar(getattr(self, name)))
        if not self.sig.has_center and (self.theta or self.mu or self.nu):
            raise DomainError("Witt operators carry no theta, mu, nu")
        if self.degree != 0 and self.nu:
            raise DomainError("nu must vanish at nonzero degree")

    def __call__(self, x) -> Element:
        return apply(self, x)

    def scaled(self, c) -> HomogeneousOperator:
        c = scalar(c)
        return HomogeneousOperator(self.sig, self.degree, self.f.scaled(c), c * self.theta, c * self.mu, c * self.nu)

    def image(self, sym: BasisSymbol) -> dict[BasisSymbol, Fraction]:
        k = self.degree
        out: dict[BasisSymbol, Fraction] = {}
        if sym.kind is Kind.WITT:
            j = sym.index + k
            v = self.f(j)
            if v:
                out[L(j)] = v
            if j == 0 and self.theta:
                out[C] = self.theta
        elif sym.kind is Kind.CENTER:
            if self.mu:
                out[L(k)] = self.mu
            if k == 0 and self.nu:
                out[C] = out.get(C, 0) + self.nu
        return out


def apply(op: HomogeneousOperator, x) -> Element:
    x = as_element(x)
    acc: dict[BasisSymbol, Fraction] = {}
    for sym, c in x.items():
        check_symbol(op.sig, sym)
        for t, v in op.image(sym).items():
            acc[t] = acc.get(t, 0) + c * v
    return Element._raw(acc)


def rb_defect(op: HomogeneousOperator, weight, x, y) -> Element:
    """``[Rx,Ry] - R([Rx,y] + [x,Ry]) - weight*R([x,y])``."""
    lam = scalar(weight)
    sig = op.sig
    rx, ry = apply(op, x), apply(op, y)
    out = bracket(sig, rx, ry) - apply(op, bracket(sig, rx, y) + bracket(sig, x, ry))
    if lam:
        out = out - apply(op, bracket(sig, x, y)) * lam
    return out


@dataclass(frozen=True)
class RBReport:
    window: int
    weight: Fraction
    failures: tuple[tuple[BasisSymbol, BasisSymbol, Element], ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "weight": str(self.weight),
            "pass": self.passed,
            "failures": [{"x": str(x), "y": str(y), "defect": str(d)} for x, y, d in self.failures],
        }


def verify_rb(op: HomogeneousOperator, weight, window: int) -> RBReport:
    """Check the weight-``weight`` identity on every pair of window basis symbols.

    The defect is antisymmetric in its two arguments, so each unordered pair is
    evaluated once and a failure is reported in both orders.
    """
    if window < 1:
        raise DomainError("window must be at least 1")
    lam = scalar(weight)
    basis = op.sig.window(window)
    failures = []
    for a, x in enumerate(basis):
        for y in basis[a + 1:]:
            d = rb_defect(op, lam, x, y)
            if d:
                failures.append((x, y, d))
                failures.append((y, x, -d))
    failures.sort(key=lambda t: (t[0], t[1]))
    return RBReport(window, lam, tuple(failures))


def companion(op: HomogeneousOperator) -> HomogeneousOperator:
    """The operator ``-R - Id``."""
    if op.degree != 0:
        raise DomainError("-R-Id is homogeneous only at degree 0")
    if not op.sig.has_center:
        return HomogeneousOperator(op.sig, 0, op.f.companion())
    return HomogeneousOperator(op.sig, 0, op.f.companion(), -op.theta, -op.mu, -op.nu - 1)


def restrict_to_witt(op: HomogeneousOperator) -> HomogeneousOperator:
    """Forget the image of C and the C-components of images."""
    return HomogeneousOperator(Signature.WITT, op.degree, op.f)


def lift_to_virasoro(op: HomogeneousOperator, theta=0, mu=0, nu=0) -> HomogeneousOperator:
    if op.sig is not Signature.WITT:
        raise DomainError("lift expects a Witt operator")
    return HomogeneousOperator(Signature.VIRASORO, op.degree, op.f, theta, mu, nu)


def index_order(window: int) -> Iterable[int]:
    """``0, 1, -1, 2, -2, ...`` up to ``window``."""
    yield 0
    for m in range(1, window + 1):
        yield m
        yield -m


@dataclass(frozen=True)
class ObstructionReport:
    window: int
    failures: tuple[tuple[int, int, Fraction], ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "pass": self.passed,
            "failures": [{"m": m, "n": n, "value": str(v)} for m, n, v in self.failures],
        }


def lifting_obstruction(op: HomogeneousOperator, window: int) -> ObstructionReport:
    """Cocycle values ``eps(R L_m, R L_n)`` over the window; all zero iff the lift with
    ``theta = mu = nu = 0`` is again Rota-Baxter of the same weight."""
    if op.sig is not Signature.WITT:
        raise DomainError("obstruction is defined for Witt operators")
    k = op.degree
    failures = []
    for m in index_order(window):
        for n in index_order(window):
            a, b = m + k, n + k
            value = op.f(a) * op.f(b) * cocycle(a, b)
            if value:
                failures.append((m, n, value))
    return ObstructionReport(window, tuple(failures))


def zero_operator(sig: Signature = Signature.WITT, degree: int = 0) -> HomogeneousOperator:
    return HomogeneousOperator(sig, degree, Zero())


__all__ = [
    "Affine",
    "CoefficientFunction",
    "CongruenceRational",
    "DeltaAt",
    "DoubleDelta",
    "HomogeneousOperator",
    "ObstructionReport",
    "RBReport",
    "StepSign",
    "Table",
    "Zero",
    "apply",
    "companion",
    "index_order",
    "lift_to_virasoro",
    "lifting_obstruction",
    "rb_defect",
    "restrict_to_witt",
    "verify_rb",
    "zero_operator",
    "ZERO",
]
