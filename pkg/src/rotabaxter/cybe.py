"""Formal tensors on ``g ⋉ g*`` and the component form of the classical Yang-Baxter equation.

A formal tensor ``r = sum a_ij e_i ⊗ e_j`` is stored as a list of bands.  A band
is an index set ``S`` with a coefficient form ``c(m)`` and two affine symbol
builders, and contributes ``c(m) left(m) ⊗ right(m)`` for every ``m`` in ``S``.
Bands may overlap; their contributions add.  Because builders are injective,
each band puts at most one entry in any row or column, so every row and
column of the tensor is finite and the CYBE components

    [[r]](i, j, k) = sum_{s,t} C^i_st a_sj a_tk + a_is C^j_st a_tk + a_is a_jt C^k_st

are finite sums that can be computed exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .algebra import (
    BasisSymbol,
    DomainError,
    Kind,
    Signature,
    scalar,
    structure_bracket,
)
from .catalog import Member, family
from .indexsets import (
    CoefForm,
    Everything,
    Finite,
    IndexSet,
    Ray,
    Residue,
    avoids_pole,
    coef_from_str,
    index_set_from_json,
)
from .operators import HomogeneousOperator, Table, Zero

_INDEXED = (Kind.WITT, Kind.DUAL_WITT)
_NAMES = {Kind.WITT: "L", Kind.CENTER: "C", Kind.DUAL_WITT: "Ld", Kind.DUAL_CENTER: "Cd"}
_KINDS = {v: k for k, v in _NAMES.items()}
_DEGREE_SIGN = {Kind.WITT: 1, Kind.DUAL_WITT: -1, Kind.CENTER: 0, Kind.DUAL_CENTER: 0}


@dataclass(frozen=True)
class SymbolMap:
    """``m -> kind(scale*m + offset)``; ``scale == 0`` is a constant builder."""

    kind: Kind
    scale: int = 1
    offset: int = 0

    def __post_init__(self):
        if self.kind not in _INDEXED:
            object.__setattr__(self, "scale", 0)
            object.__setattr__(self, "offset", 0)
        elif self.scale not in (-1, 0, 1):
            raise DomainError("builder scale must be -1, 0 or 1")

    def __call__(self, m: int) -> BasisSymbol:
        return BasisSymbol(self.kind, self.scale * m + self.offset)

    @property
    def constant(self) -> bool:
        return self.scale == 0

    def preimage(self, sym: BasisSymbol, s: IndexSet) -> list[int]:
        if sym.kind is not self.kind:
            return []
        if self.scale == 0:
            if sym.index != self.offset:
                return []
            return list(s)  # finite by construction
        m = (sym.index - self.offset) * self.scale
        return [m] if m in s else []

    def degree(self) -> tuple[int, int]:
        """``(a, b)`` with ``deg(self(m)) = a*m + b``."""
        sign = _DEGREE_SIGN[self.kind]
        return sign * self.scale, sign * self.offset

    def __str__(self) -> str:
        name = _NAMES[self.kind]
        if self.kind not in _INDEXED:
            return name
        if self.scale == 0:
            return f"{name}({self.offset})"
        body = "m" if self.scale == 1 else "-m"
        if self.offset:
            body += f"{self.offset:+d}"
        return f"{name}({body})"


_BUILDER_RE = re.compile(r"^\s*(Ld|L|Cd|C)\s*(?:\(\s*(?:(-?)m\s*([+-]\s*\d+)?|(-?\d+))\s*\))?\s*$")


def parse_builder(text: str) -> SymbolMap:
    match = _BUILDER_RE.match(text)
    if not match:
        raise DomainError(f"malformed symbol builder {text!r}")
    kind = _KINDS[match.group(1)]
    if kind not in _INDEXED:
        return SymbolMap(kind)
    if match.group(4) is not None:
        return SymbolMap(kind, 0, int(match.group(4)))
    if match.group(2) is None and match.group(3) is None and "m" not in text:
        raise DomainError(f"builder {text!r} needs an index")
    scale = -1 if match.group(2) == "-" else 1
    offset = int(match.group(3).replace(" ", "")) if match.group(3) else 0
    return SymbolMap(kind, scale, offset)


@dataclass(frozen=True)
class Band:
    index_set: IndexSet
    coef: CoefForm
    left: SymbolMap
    right: SymbolMap

    def __post_init__(self):
        s = self.index_set
        if not s.is_finite and (self.left.constant or self.right.constant):
            raise DomainError("a constant builder needs a finite index set")
        if s.is_finite:
            for builder in (self.left, self.right):
                images = [builder(m) for m in s]
                if len(set(images)) != len(images):
                    raise DomainError(f"builder {builder} is not injective on {s}")
        if not avoids_pole(s, self.coef):
            raise DomainError(f"coefficient {self.coef} has a pole in {s}")

    def row(self, i: BasisSymbol) -> list[tuple[BasisSymbol, Fraction]]:
        return [(self.right(m), self.coef(m)) for m in self.left.preimage(i, self.index_set)]

    def column(self, j: BasisSymbol) -> list[tuple[BasisSymbol, Fraction]]:
        return [(self.left(m), self.coef(m)) for m in self.right.preimage(j, self.index_set)]

    def transpose(self) -> Band:
        return Band(self.index_set, self.coef, self.right, self.left)

    def scaled(self, c) -> Band:
        return Band(self.index_set, self.coef.scaled(scalar(c)), self.left, self.right)

    def degree(self) -> int | None:
        """The constant degree of every entry, or ``None`` if it varies with ``m``."""
        a1, b1 = self.left.degree()
        a2, b2 = self.right.degree()
        return b1 + b2 if a1 + a2 == 0 else None

    def entries(self, window: int) -> Iterable[tuple[BasisSymbol, BasisSymbol, Fraction]]:
        """Entries with both symbols indexed inside ``[-window, window]``."""
        s = self.index_set
        if s.is_finite:
            candidates = list(s)
        else:
            builder = self.left if not self.left.constant else self.right
            bounds = sorted(builder.scale * (e - builder.offset) for e in (-window, window))
            candidates = list(s.within(bounds[0], bounds[1]))
        for m in candidates:
            i, j = self.left(m), self.right(m)
            if abs(i.index) <= window and abs(j.index) <= window:
                yield i, j, self.coef(m)

    def to_json(self) -> dict:
        return {"set": self.index_set.to_json(), "coef": str(self.coef), "left": str(self.left), "right": str(self.right)}

    @classmethod
    def from_json(cls, obj: dict) -> Band:
        return cls(index_set_from_json(obj["set"]), coef_from_str(obj["coef"]),
                   parse_builder(obj["left"]), parse_builder(obj["right"]))


@dataclass(frozen=True)
class FormalTensor:
    sig: Signature
    bands: tuple[Band, ...] = ()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not self.sig.is_semidirect:
            object.__setattr__(self, "sig", self.sig.semidirect)
        object.__setattr__(self, "bands", tuple(b for b in self.bands if b.coef.num))
        for band in self.bands:
            for builder in (band.left, band.right):
                if builder.kind in (Kind.CENTER, Kind.DUAL_CENTER) and not self.sig.has_center:
                    raise DomainError(f"{builder} is not a symbol of {self.sig.value}")

    def row(self, i: BasisSymbol) -> dict[BasisSymbol, Fraction]:
        key = ("row", i)
        if key not in self._cache:
            acc: dict[BasisSymbol, Fraction] = {}
            for band in self.bands:
                for j, v in band.row(i):
                    acc[j] = acc.get(j, 0) + v
            self._cache[key] = {j: v for j, v in acc.items() if v}
        return self._cache[key]

    def column(self, j: BasisSymbol) -> dict[BasisSymbol, Fraction]:
        key = ("col", j)
        if key not in self._cache:
            acc: dict[BasisSymbol, Fraction] = {}
            for band in self.bands:
                for i, v in band.column(j):
                    acc[i] = acc.get(i, 0) + v
            self._cache[key] = {i: v for i, v in acc.items() if v}
        return self._cache[key]

    def coefficient_at(self, i: BasisSymbol, j: BasisSymbol) -> Fraction:
        return self.row(i).get(j, Fraction(0))

    def transpose(self) -> FormalTensor:
        return FormalTensor(self.sig, tuple(b.transpose() for b in self.bands))

    def __add__(self, other: FormalTensor) -> FormalTensor:
        if self.sig is not other.sig:
            raise DomainError("tensors over different algebras")
        return FormalTensor(self.sig, self.bands + other.bands)

    def __neg__(self) -> FormalTensor:
        return self.scaled(-1)

    def __sub__(self, other: FormalTensor) -> FormalTensor:
        return self + (-other)

    def scaled(self, c) -> FormalTensor:
        return FormalTensor(self.sig, tuple(b.scaled(c) for b in self.bands))

    def degrees(self) -> set[int] | None:
        """Entry degrees if every band has constant degree, else ``None``."""
        out = set()
        for b in self.bands:
            d = b.degree()
            if d is None:
                return None
            out.add(d)
        return out

    def window_entries(self, window: int) -> dict[tuple[BasisSymbol, BasisSymbol], Fraction]:
        acc: dict[tuple[BasisSymbol, BasisSymbol], Fraction] = {}
        for band in self.bands:
            for i, j, v in band.entries(window):
                acc[(i, j)] = acc.get((i, j), 0) + v
        return {k: v for k, v in sorted(acc.items()) if v}

    def check_finiteness(self, window: int) -> bool:
        """Every window row and column is a finite sum with at most one entry per band."""
        for sym in self.sig.window(window):
            for band in self.bands:
                if len(band.row(sym)) > 1 or len(band.column(sym)) > 1:
                    return False
        return True

    def to_json(self) -> dict:
        return {"signature": self.sig.value, "bands": [b.to_json() for b in self.bands]}

    @classmethod
    def from_json(cls, obj: dict) -> FormalTensor:
        sig = Signature(obj.get("signature", Signature.WITT_SEMIDIRECT.value))
        return cls(sig, tuple(Band.from_json(b) for b in obj["bands"]))


def identity_tensor(sig: Signature) -> FormalTensor:
    """``Id = sum L_m ⊗ L*_m`` (plus ``C ⊗ C*`` on the Virasoro side)."""
    bands = [Band(Everything(), CoefForm.const(1), SymbolMap(Kind.WITT), SymbolMap(Kind.DUAL_WITT))]
    if sig.has_center:
        bands.append(_single(BasisSymbol(Kind.CENTER), BasisSymbol(Kind.DUAL_CENTER), 1))
    return FormalTensor(sig.semidirect, tuple(bands))


def _single(i: BasisSymbol, j: BasisSymbol, c) -> Band:
    return Band(Finite((0,)), CoefForm.const(c), SymbolMap(i.kind, 0, i.index), SymbolMap(j.kind, 0, j.index))


def operator_to_tensor(op: HomogeneousOperator) -> FormalTensor:
    """``R = sum R(e_m) ⊗ e*_m`` as bands in the source index ``m``."""
    if isinstance(op.f, Table):
        raise DomainError("table-backed operators have no closed-form tensor")
    k = op.degree
    bands = []
    for s, coef in op.f.pieces():
        bands.append(Band(s.shift(-k), coef.shift(k), SymbolMap(Kind.WITT, 1, k), SymbolMap(Kind.DUAL_WITT)))
    c, cd = BasisSymbol(Kind.CENTER), BasisSymbol(Kind.DUAL_CENTER)
    if op.theta:
        bands.append(_single(c, BasisSymbol(Kind.DUAL_WITT, -k), op.theta))
    if op.mu:
        bands.append(_single(BasisSymbol(Kind.WITT, k), cd, op.mu))
    if op.nu:
        bands.append(_single(c, cd, op.nu))
    return FormalTensor(op.sig.semidirect, tuple(bands))


def transpose(r: FormalTensor) -> FormalTensor:
    return r.transpose()


def skewize(op: HomogeneousOperator | FormalTensor) -> FormalTensor:
    """``R - R^21``."""
    r = op if isinstance(op, FormalTensor) else operator_to_tensor(op)
    return r - r.transpose()


def weight1_pair(op: HomogeneousOperator) -> tuple[FormalTensor, FormalTensor]:
    """``((R - R^21) + Id, (R - R^21) - Id^21)``."""
    if op.degree != 0:
        raise DomainError("the identity has degree 0")
    s = skewize(op)
    ident = identity_tensor(op.sig)
    return s + ident, s - ident.transpose()


def cybe_component(r: FormalTensor, i: BasisSymbol, j: BasisSymbol, k: BasisSymbol) -> Fraction:
    sig = r.sig
    total = Fraction(0)
    col_j, col_k = r.column(j), r.column(k)
    row_i, row_j = r.row(i), r.row(j)
    for s, a_sj in col_j.items():
        for t, a_tk in col_k.items():
            c = structure_bracket(sig, s, t).coefficient(i)
            if c:
                total += c * a_sj * a_tk
    for s, a_is in row_i.items():
        for t, a_tk in col_k.items():
            c = structure_bracket(sig, s, t).coefficient(j)
            if c:
                total += a_is * c * a_tk
    for s, a_is in row_i.items():
        for t, a_jt in row_j.items():
            c = structure_bracket(sig, s, t).coefficient(k)
            if c:
                total += a_is * a_jt * c
    return total


@dataclass(frozen=True)
class CybeReport:
    window: int
    failures: tuple[tuple[tuple[BasisSymbol, BasisSymbol, BasisSymbol], Fraction], ...]
    checked: int

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "pass": self.passed,
            "checked": self.checked,
            "failures": [{"i": str(a), "j": str(b), "k": str(c), "value": str(v)} for (a, b, c), v in self.failures],
        }


def verify_formal_cybe(r: FormalTensor, window: int) -> CybeReport:
    """All components over window triples.

    When every band has constant degree ``d``, a component can only be nonzero if
    the three degrees sum into ``D + D``; other triples are counted as checked
    without evaluation.
    """
    if window < 1:
        raise DomainError("window must be at least 1")
    basis = r.sig.window(window)
    degrees = r.degrees()
    failures = []
    if degrees is None:
        triples = ((i, j, k) for i in basis for j in basis for k in basis)
    else:
        allowed = sorted({a + b for a in degrees for b in degrees})
        by_degree: dict[int, list[BasisSymbol]] = {}
        for sym in basis:
            by_degree.setdefault(sym.degree, []).append(sym)
        triples = (
            (i, j, k)
            for i in basis
            for j in basis
            for d in allowed
            for k in by_degree.get(d - i.degree - j.degree, ())
        )
    for i, j, k in triples:
        v = cybe_component(r, i, j, k)
        if v:
            failures.append(((i, j, k), v))
    failures.sort(key=lambda t: t[0])
    return CybeReport(window, tuple(failures), len(basis) ** 3)


# hand-built tensors as listed for each family

def _skew_single(i: BasisSymbol, j: BasisSymbol, c) -> list[Band]:
    return [_single(i, j, c), _single(j, i, -Fraction(c))] if c else []


def _L(n):
    return BasisSymbol(Kind.WITT, n)


def _Ld(n):
    return BasisSymbol(Kind.DUAL_WITT, n)


_C = BasisSymbol(Kind.CENTER)
_Cd = BasisSymbol(Kind.DUAL_CENTER)


def _diag(s: IndexSet, dual_first: bool, c=1) -> Band:
    """``c * sum_{m in s} L_m ⊗ L*_m`` or its transpose."""
    primal, dual = SymbolMap(Kind.WITT), SymbolMap(Kind.DUAL_WITT)
    return Band(s, CoefForm.const(c), dual if dual_first else primal, primal if dual_first else dual)


# (zero set of R, complement) for the degree-0 step shapes
_STEP_SETS = {
    "LE1": (Ray("leq", 1), Ray("gt", 1)),
    "GEM1": (Ray("geq", -1), Ray("lt", -1)),
    "GT1": (Ray("gt", 1), Ray("leq", 1)),
    "LTM1": (Ray("lt", -1), Ray("geq", -1)),
}


def _witt_weight1(shape: str, alpha: Fraction) -> list[Band]:
    if shape in _STEP_SETS:
        kept, flipped = _STEP_SETS[shape]
        return [_diag(kept, False), _diag(flipped, True)]
    if shape == "ZERO":
        return [_diag(Everything(), False)]
    if shape == "EMPTY":
        return [_diag(Everything(), True)]
    neg, pos = (Ray("lt", 0), Ray("gt", 0)) if shape == "PLUS" else (Ray("gt", 0), Ray("lt", 0))
    bands = [_diag(neg, True), _diag(pos, False)]
    if alpha + 1:
        bands.append(_single(_L(0), _Ld(0), alpha + 1))
    if alpha:
        bands.append(_single(_Ld(0), _L(0), -alpha))
    return bands


def make_cybe_solution(name: str, params=None, **kw) -> FormalTensor:
    """The tensor listed for a family: ``R - R^21`` at weight 0, ``(R - R^21) + Id`` at weight 1."""
    member = Member.of(name, params, **kw)
    member.check()
    p = member.kwargs
    fam = family(name)
    if name.endswith("_NULL"):
        raise DomainError(f"{name} has no listed tensor")
    bands: list[Band] = []
    if name in ("W0_I", "V0_II"):
        k = p["k"]
        bands = _skew_single(_L(-k), _Ld(-2 * k), p["alpha"])
    elif name in ("W0_II", "V0_III"):
        k, beta = p["k"], p["beta"]
        bands = _skew_single(_L(0), _Ld(-2 * k), beta) + _skew_single(_L(-k), _Ld(-3 * k), 2 * beta)
        if name == "V0_III":
            bands += _skew_single(_C, _Ld(-2 * k), p["vartheta"])
    elif name == "W0_III":
        k, l, gamma = p["k"], p["l"], p["gamma"]
        s = Residue(-k, l)
        coef = CoefForm(k * gamma, 1, 2 * k)
        bands = [
            Band(s, coef, SymbolMap(Kind.WITT, 1, k), SymbolMap(Kind.DUAL_WITT)),
            Band(s, coef.scaled(-1), SymbolMap(Kind.DUAL_WITT), SymbolMap(Kind.WITT, 1, k)),
        ]
    elif name == "V0_DEG0":
        bands = (_skew_single(_L(0), _Ld(0), p["alpha"]) + _skew_single(_C, _Ld(0), p["theta"])
                 + _skew_single(_L(0), _Cd, p["mu"]) + _skew_single(_C, _Cd, p["nu"]))
    elif name == "V0_I":
        bands = _skew_single(_C, _Ld(-p["k"]), p["theta"])
    elif name == "V0_IV":
        k, mu = p["k"], p["mu"]
        bands = _skew_single(_L(k), _Ld(0), -Fraction(k * k - 1, 24) * mu) + _skew_single(_L(k), _Cd, mu)
    elif fam.weight == 1:
        shape = name.split("_", 1)[1]
        bands = _witt_weight1(shape, p.get("alpha", Fraction(0)))
        if fam.sig is Signature.VIRASORO:
            if shape == "EMPTY":
                bands.append(_single(_Cd, _C, 1))
            else:
                bands += (_skew_single(_C, _Ld(0), p.get("theta", 0)) + _skew_single(_L(0), _Cd, p.get("mu", 0))
                          + _skew_single(_C, _Cd, p.get("nu", 0)))
                bands.append(_single(_C, _Cd, 1))
    else:
        raise DomainError(f"no listed tensor for {name}")
    return FormalTensor(fam.sig.semidirect, tuple(bands))


def tensor_from_member(member: Member) -> FormalTensor:
    """The operator-derived counterpart of :func:`make_cybe_solution`."""
    op = member.operator()
    if family(member.family).weight == 1:
        return weight1_pair(op)[0]
    return skewize(op)


def zero_tensor(sig: Signature) -> FormalTensor:
    return FormalTensor(sig.semidirect, ())


__all__ = [
    "Band",
    "CybeReport",
    "FormalTensor",
    "SymbolMap",
    "cybe_component",
    "identity_tensor",
    "make_cybe_solution",
    "operator_to_tensor",
    "parse_builder",
    "skewize",
    "tensor_from_member",
    "transpose",
    "verify_formal_cybe",
    "weight1_pair",
    "zero_tensor",
    "Zero",
]
