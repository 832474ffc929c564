"""Pre-Lie and PostLie products induced by Rota-Baxter operators, and their closed forms.

``x * y = [R(x), y]`` is pre-Lie for a weight-0 operator, and together with the
ambient bracket it is PostLie for a weight-1 operator.  Closed-form catalog
products are lists of cases on basis pairs; every pair must hit exactly one
case.  The commutator of a product and the PostLie brace
``{x, y} = x∘y - y∘x + [x, y]`` are derived products.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .algebra import (
    C,
    DomainError,
    Element,
    Kind,
    L,
    Signature,
    ZERO,
    as_element,
    bracket,
    check_symbol,
    cocycle,
    format_scalar,
    scalar,
)
from .catalog import Member, family
from .operators import HomogeneousOperator, apply

Sym = object  # BasisSymbol; kept loose for the case lambdas


class BilinearProduct:
    """A bilinear product given on basis pairs; results are cached."""

    sig: Signature
    name: str

    def __init__(self, sig: Signature, name: str):
        if sig.is_semidirect:
            raise DomainError("products live on the Witt or Virasoro algebra")
        self.sig = sig
        self.name = name
        self._cache: dict = {}

    def _basis(self, i, j) -> Element:
        raise NotImplementedError

    def basis_product(self, i, j) -> Element:
        key = (i, j)
        out = self._cache.get(key)
        if out is None:
            check_symbol(self.sig, i)
            check_symbol(self.sig, j)
            out = self._cache[key] = self._basis(i, j)
        return out

    def __call__(self, x, y) -> Element:
        x, y = as_element(x), as_element(y)
        acc: dict = {}
        for s, a in x.items():
            for t, b in y.items():
                for u, c in self.basis_product(s, t).items():
                    acc[u] = acc.get(u, 0) + a * b * c
        return Element(acc)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} on {self.sig.value}>"


class OperatorInduced(BilinearProduct):
    """``x * y = [R(x), y]``."""

    def __init__(self, op: HomogeneousOperator, name: str | None = None):
        super().__init__(op.sig, name or "induced")
        self.op = op

    def _basis(self, i, j) -> Element:
        return bracket(self.sig, apply(self.op, i), j)


class AmbientBracket(BilinearProduct):
    def __init__(self, sig: Signature):
        super().__init__(sig, "bracket")

    def _basis(self, i, j) -> Element:
        return bracket(self.sig, i, j)


@dataclass(frozen=True)
class Case:
    label: str
    when: Callable[[Sym, Sym], bool]
    value: Callable[[Sym, Sym], Element]


class ClosedForm(BilinearProduct):
    """A product given by mutually exclusive, exhaustive cases."""

    def __init__(self, sig: Signature, name: str, cases: Iterable[Case]):
        super().__init__(sig, name)
        self.cases = tuple(cases)

    def case_of(self, i, j) -> Case:
        hits = [c for c in self.cases if c.when(i, j)]
        if len(hits) != 1:
            labels = [c.label for c in hits] or ["no case"]
            raise DomainError(f"{self.name}: ({i}, {j}) matches {labels}")
        return hits[0]

    def _basis(self, i, j) -> Element:
        return as_element(self.case_of(i, j).value(i, j))


class Commutator(BilinearProduct):
    """``x * y - y * x``."""

    def __init__(self, p: BilinearProduct):
        super().__init__(p.sig, f"commutator({p.name})")
        self.p = p

    def _basis(self, i, j) -> Element:
        return self.p.basis_product(i, j) - self.p.basis_product(j, i)


@dataclass(frozen=True)
class PostLieStructure:
    """An ambient Lie bracket together with a second product ``∘``."""

    sig: Signature
    circ: BilinearProduct
    bracket: BilinearProduct = field(init=False)

    def __post_init__(self):
        if self.circ.sig is not self.sig:
            raise DomainError("product and bracket live on different algebras")
        object.__setattr__(self, "bracket", AmbientBracket(self.sig))


class Brace(BilinearProduct):
    """``{x, y} = x∘y - y∘x + [x, y]``."""

    def __init__(self, s: PostLieStructure):
        super().__init__(s.sig, f"brace({s.circ.name})")
        self.s = s

    def _basis(self, i, j) -> Element:
        circ = self.s.circ
        return circ.basis_product(i, j) - circ.basis_product(j, i) + bracket(self.sig, i, j)


def induced_prelie(op: HomogeneousOperator) -> BilinearProduct:
    return OperatorInduced(op, "prelie")


def induced_postlie(op: HomogeneousOperator) -> PostLieStructure:
    if op.degree != 0:
        raise DomainError("PostLie structures come from degree-0 operators")
    return PostLieStructure(op.sig, OperatorInduced(op, "postlie"))


def subadjacent(p: BilinearProduct) -> BilinearProduct:
    return Commutator(p)


def postlie_brace(s: PostLieStructure) -> BilinearProduct:
    return Brace(s)


def zero_product(sig: Signature) -> ClosedForm:
    return ClosedForm(sig, "zero", [Case("all", lambda x, y: True, lambda x, y: ZERO)])


def prelie_defect(p: BilinearProduct, x, y, z) -> Element:
    """``(x*y)*z - x*(y*z) - (y*x)*z + y*(x*z)``."""
    return p(p(x, y), z) - p(x, p(y, z)) - p(p(y, x), z) + p(y, p(x, z))


def postlie_defects(s: PostLieStructure, x, y, z) -> tuple[Element, Element]:
    o, br = s.circ, s.bracket
    first = (o(o(x, y), z) - o(x, o(y, z))) - (o(o(y, x), z) - o(y, o(x, z))) + o(br(x, y), z)
    second = o(z, br(x, y)) - br(o(z, x), y) - br(x, o(z, y))
    return first, second


def product_jacobi_defect(p: BilinearProduct, x, y, z) -> Element:
    return p(p(x, y), z) + p(p(y, z), x) + p(p(z, x), y)


def window_basis(sig: Signature, window: int) -> list:
    return sig.base.window(window)


def scan_pairs(check: Callable, basis) -> list:
    out = []
    for x in basis:
        for y in basis:
            v = check(x, y)
            if v:
                out.append(((x, y), v))
    return out


def scan_triples(check: Callable, basis) -> list:
    out = []
    for x in basis:
        for y in basis:
            for z in basis:
                v = check(x, y, z)
                if isinstance(v, tuple):
                    if any(v):
                        out.append(((x, y, z), v))
                elif v:
                    out.append(((x, y, z), v))
    return out


# basis transforms

def shift_symbol(sym, s: int) -> Element:
    return Element.basis(L(sym.index + s)) if sym.kind is Kind.WITT else Element.basis(sym)


def flip_symbol(sym) -> Element:
    return Element.basis(L(-sym.index), -1) if sym.kind is Kind.WITT else Element.basis(sym, -1)


def _map(phi: Callable, x: Element) -> Element:
    acc = ZERO
    for s, c in x.items():
        acc = acc + phi(s) * c
    return acc


def equal_under(p: BilinearProduct, q: BilinearProduct, phi: Callable, window: int) -> list:
    """Window pairs where ``phi(p(x, y)) != q(phi(x), phi(y))``; empty means ``phi`` intertwines."""
    if p.sig is not q.sig:
        raise DomainError("products on different algebras")
    bad = []
    for x in window_basis(p.sig, window):
        for y in window_basis(p.sig, window):
            lhs = _map(phi, p.basis_product(x, y))
            rhs = q(phi(x), phi(y))
            if lhs != rhs:
                bad.append(((x, y), lhs, rhs))
    return bad


def equal_after_shift(p: BilinearProduct, q: BilinearProduct, shift: int, window: int) -> bool:
    """Whether ``L_m -> L_{m+shift}`` (fixing ``C``) carries ``p`` onto ``q`` on window pairs."""
    return not equal_under(p, q, lambda s: shift_symbol(s, shift), window)


def equal_after_flip(p: BilinearProduct, q: BilinearProduct, window: int) -> bool:
    """The same for ``L_m -> -L_{-m}``, ``C -> -C``."""
    return not equal_under(p, q, flip_symbol, window)


def multiplication_table(p: BilinearProduct, window: int) -> list[dict]:
    basis = window_basis(p.sig, window)
    return [{"x": str(x), "y": str(y), "xy": str(p.basis_product(x, y))} for x in basis for y in basis]


# closed-form catalog

def _wit(x) -> bool:
    return x.kind is Kind.WITT


def _cen(x) -> bool:
    return x.kind is Kind.CENTER


def _ll(pred: Callable[[int, int], bool]) -> Callable:
    return lambda x, y: _wit(x) and _wit(y) and pred(x.index, y.index)


def _cl(pred: Callable[[int], bool] = lambda n: True) -> Callable:
    return lambda x, y: _cen(x) and _wit(y) and pred(y.index)


def _on_l(fn: Callable[[int, int], Element]) -> Callable:
    return lambda x, y: fn(x.index, y.index)


def _on_n(fn: Callable[[int], Element]) -> Callable:
    return lambda x, y: fn(y.index)


def _zero(x, y) -> Element:
    return ZERO


def _lin(*terms) -> Element:
    return Element([(s, c) for s, c in terms])


def _center_cases(cl_value: Callable[[int], Element] | None = None) -> list[Case]:
    """``C * L_n`` as given, ``L_n * C = C * C = 0``."""
    cases = [
        Case("L*C", lambda x, y: _wit(x) and _cen(y), _zero),
        Case("C*C", lambda x, y: _cen(x) and _cen(y), _zero),
    ]
    if cl_value is None:
        cases.append(Case("C*L", _cl(), _zero))
    else:
        cases.append(Case("C*L", _cl(), _on_n(cl_value)))
    return cases


def _complete(listed: list[Case]) -> list[Case]:
    """Add the cases forced by antisymmetry for pairs the listed cases leave out."""

    def uncovered(x, y):
        return not any(c.when(x, y) for c in listed)

    out = list(listed)
    for c in listed:
        out.append(Case(
            f"swap of {c.label}",
            (lambda c: lambda x, y: uncovered(x, y) and c.when(y, x))(c),
            (lambda c: lambda x, y: -as_element(c.value(y, x)))(c),
        ))
    out.append(Case("diagonal", lambda x, y: x == y and uncovered(x, y) and not any(c.when(y, x) for c in listed), _zero))
    return out


def _bracket_l(sig: Signature, m: int, n: int, scale=1) -> Element:
    """``scale * [L_m, L_n]`` in the given algebra."""
    return bracket(sig, L(m), L(n)) * scale


# pre-Lie products

def _prelie_w0_i(sig, k):
    return [
        Case("m=0", _ll(lambda m, n: m == 0), _on_l(lambda m, n: _lin((L(n - k), k - n)))),
        Case("m!=0", _ll(lambda m, n: m != 0), _zero),
    ]


def _prelie_w0_ii(sig, k):
    return [
        Case("m=0", _ll(lambda m, n: m == 0), _on_l(lambda m, n: _lin((L(n), 2 * k - n)))),
        Case("m=-k", _ll(lambda m, n: m == -k), _on_l(lambda m, n: _lin((L(n - k), 2 * k - 2 * n)))),
        Case("m!=0,-k", _ll(lambda m, n: m not in (0, -k)), _zero),
    ]


def _prelie_w0_iii(sig, k, l):
    return [
        Case("m in lZ", _ll(lambda m, n: m % l == 0),
             _on_l(lambda m, n: _lin((L(m + n), Fraction((m + k - n) * k, m + k))))),
        Case("m not in lZ", _ll(lambda m, n: m % l != 0), _zero),
    ]


def _v_prelie_ii_row(k, n) -> Element:
    return _lin((L(n - k), k - n), (C, -Fraction(k**3 - k, 12) if n == 3 * k else 0))


def _prelie_v0_deg0(sig, alpha, mu):
    return [
        Case("L*L", _ll(lambda m, n: True), _on_l(lambda m, n: _lin((L(n), -n * alpha)) if m == 0 else ZERO)),
    ] + _center_cases(lambda n: _lin((L(n), -n * mu)))


def _prelie_v0_ii(sig, k):
    return [
        Case("m=0", _ll(lambda m, n: m == 0), _on_l(lambda m, n: _v_prelie_ii_row(k, n))),
        Case("m!=0", _ll(lambda m, n: m != 0), _zero),
    ] + _center_cases()


def _prelie_v0_iii(sig, k):
    return [
        Case("m=0", _ll(lambda m, n: m == 0), _on_l(lambda m, n: _lin((L(n), 2 * k - n)))),
        Case("m=-k", _ll(lambda m, n: m == -k), _on_l(lambda m, n: _v_prelie_ii_row(k, n) * 2)),
        Case("m!=0,-k", _ll(lambda m, n: m not in (0, -k)), _zero),
    ] + _center_cases()


def _v0_iv_c_row(k, n) -> Element:
    return _lin((L(n + k), k - n), (C, Fraction(k**3 - k, 12) if n + k == 0 else 0))


def _prelie_v0_iv(sig, k):
    # the L-row is written through the C-row; substituted here
    factor = -Fraction(k * k - 1, 24)
    return [
        Case("m=0", _ll(lambda m, n: m == 0), _on_l(lambda m, n: _v0_iv_c_row(k, n) * factor)),
        Case("m!=0", _ll(lambda m, n: m != 0), _zero),
    ] + _center_cases(lambda n: _v0_iv_c_row(k, n))


# sub-adjacent brackets, as listed then completed by antisymmetry

def _sub_w0_i(sig, k):
    return _complete([
        Case("m=0,n!=0", _ll(lambda m, n: m == 0 and n != 0), _on_l(lambda m, n: _lin((L(n - k), k - n)))),
        Case("m,n!=0", _ll(lambda m, n: m != 0 and n != 0), _zero),
    ])


def _sub_w0_ii(sig, k):
    out = (0, -k)
    return _complete([
        Case("m=0,n!=0,-k", _ll(lambda m, n: m == 0 and n not in out), _on_l(lambda m, n: _lin((L(n), 2 * k - n)))),
        Case("m=-k,n!=0,-k", _ll(lambda m, n: m == -k and n not in out),
             _on_l(lambda m, n: _lin((L(n - k), 2 * k - 2 * n)))),
        Case("m=0,n=-k", _ll(lambda m, n: m == 0 and n == -k), _on_l(lambda m, n: _lin((L(-k), k)))),
        Case("m,n!=0,-k", _ll(lambda m, n: m not in out and n not in out), _zero),
    ])


def _sub_w0_iii(sig, k, l):
    def both(m, n):
        return _lin((L(m + n), Fraction((m - n) * (m + n + k) * k, (m + k) * (n + k))))

    return _complete([
        Case("m in lZ,n not in lZ", _ll(lambda m, n: m % l == 0 and n % l != 0),
             _on_l(lambda m, n: _lin((L(m + n), Fraction((m + k - n) * k, m + k))))),
        Case("m,n in lZ", _ll(lambda m, n: m % l == 0 and n % l == 0), _on_l(both)),
        Case("m,n not in lZ", _ll(lambda m, n: m % l != 0 and n % l != 0), _zero),
    ])


def _sub_v0_deg0(sig, alpha, mu):
    return _complete([
        Case("L,L", _ll(lambda m, n: True),
             _on_l(lambda m, n: _lin((L(n), -n * alpha if m == 0 else 0), (L(m), m * alpha if n == 0 else 0)))),
        Case("C,L", _cl(), _on_n(lambda n: _lin((L(n), -n * mu)))),
    ])


def _sub_v0_ii(sig, k):
    return _complete([
        Case("m=0,n=3k", _ll(lambda m, n: m == 0 and n == 3 * k),
             _on_l(lambda m, n: _lin((L(2 * k), -2 * k), (C, -Fraction(k**3 - k, 12))))),
        Case("m=0,n!=0,3k", _ll(lambda m, n: m == 0 and n not in (0, 3 * k)),
             _on_l(lambda m, n: _lin((L(n - k), k - n)))),
        Case("m,n!=0", _ll(lambda m, n: m != 0 and n != 0), _zero),
        Case("C,L", _cl(), _zero),
    ])


def _sub_v0_iii(sig, k):
    out = (0, -k)
    return _complete([
        Case("m=-k,n=3k", _ll(lambda m, n: m == -k and n == 3 * k),
             _on_l(lambda m, n: _lin((L(2 * k), -4 * k), (C, Fraction(k - k**3, 6))))),
        Case("m=-k,n=0", _ll(lambda m, n: m == -k and n == 0), _on_l(lambda m, n: _lin((L(-k), -k)))),
        Case("m=-k,n!=0,-k,3k", _ll(lambda m, n: m == -k and n not in (0, -k, 3 * k)),
             _on_l(lambda m, n: _lin((L(n - k), 2 * (k - n))))),
        Case("m=0,n!=0,-k", _ll(lambda m, n: m == 0 and n not in out), _on_l(lambda m, n: _lin((L(n), 2 * k - n)))),
        Case("m,n!=0,-k", _ll(lambda m, n: m not in out and n not in out), _zero),
        Case("C,L", _cl(), _zero),
    ])


def _sub_v0_iv(sig, k):
    factor = -Fraction(k * k - 1, 24)
    special = _lin((L(0), 2 * k), (C, Fraction(k**3 - k, 12)))
    return _complete([
        Case("m=0,n=-k", _ll(lambda m, n: m == 0 and n == -k), lambda x, y: special * factor),
        Case("m=0,n!=0,-k", _ll(lambda m, n: m == 0 and n not in (0, -k)),
             _on_l(lambda m, n: _lin((L(n + k), k - n)) * factor)),
        Case("m,n!=0", _ll(lambda m, n: m != 0 and n != 0), _zero),
        Case("C,L_n n=-k", _cl(lambda n: n == -k), lambda x, y: special),
        Case("C,L_n n!=-k", _cl(lambda n: n != -k), _on_n(lambda n: _lin((L(n + k), k - n)))),
    ])


# PostLie products

_STEP_REGIONS = {
    # acting region of R = -1 on L_m
    "LE1": lambda m: m >= 2,
    "GT1": lambda m: m <= 1,
    "EMPTY": lambda m: True,
    "ZERO": lambda m: False,
}


def _postlie_cases(sig, shape, alpha=0, mu=0):
    if shape == "PLUS":
        cases = [
            Case("m<0", _ll(lambda m, n: m < 0), _on_l(lambda m, n: -_bracket_l(sig, m, n))),
            Case("m=0", _ll(lambda m, n: m == 0), _on_l(lambda m, n: _lin((L(n), -alpha * n)))),
            Case("m>0", _ll(lambda m, n: m > 0), _zero),
        ]
    else:
        acts = _STEP_REGIONS[shape]
        cases = [
            Case("acting", _ll(lambda m, n: acts(m)), _on_l(lambda m, n: -_bracket_l(sig, m, n))),
            Case("resting", _ll(lambda m, n: not acts(m)), _zero),
        ]
    if sig.has_center:
        cases += _center_cases(lambda n: _lin((L(n), -mu * n)))
    return cases


def _brace_cases(sig, shape, alpha=0, mu=0):
    def single(m, n):
        return -_bracket_l(sig, m, n)

    def double(m, n):
        return -_bracket_l(sig, m, n) * 2

    if shape == "PLUS":
        listed = [
            Case("m,n<0", _ll(lambda m, n: m < 0 and n < 0), _on_l(double)),
            Case("m<0,n>0", _ll(lambda m, n: m < 0 and n > 0), _on_l(single)),
            Case("m<0,n=0", _ll(lambda m, n: m < 0 and n == 0),
                 _on_l(lambda m, n: _lin((L(m), -(1 - alpha) * m), (C, -cocycle(m, -m) if m == 0 else 0)))),
            Case("m=0,n>0", _ll(lambda m, n: m == 0 and n > 0), _on_l(lambda m, n: _lin((L(n), -alpha * n)))),
            Case("m,n>0", _ll(lambda m, n: m > 0 and n > 0), _zero),
        ]
    elif shape == "ZERO":
        listed = [Case("all", _ll(lambda m, n: True), _zero)]
    elif shape == "EMPTY":
        listed = [Case("all", _ll(lambda m, n: True), _on_l(double))]
    else:
        acts = _STEP_REGIONS[shape]
        listed = [
            Case("both acting", _ll(lambda m, n: acts(m) and acts(n)), _on_l(double)),
            Case("acting,resting", _ll(lambda m, n: acts(m) and not acts(n)), _on_l(single)),
            Case("both resting", _ll(lambda m, n: not acts(m) and not acts(n)), _zero),
        ]
    if sig.has_center:
        listed.append(Case("C,L", _cl(), _on_n(lambda n: _lin((L(n), -mu * n)))))
    return _complete(listed)


@dataclass(frozen=True)
class ProductEntry:
    kind: str  # prelie, subadjacent, postlie, brace
    key: str
    sig: Signature
    int_params: tuple[str, ...]
    rational_params: tuple[str, ...]
    build: Callable
    check: Callable = lambda **_: None

    @property
    def params(self) -> tuple[str, ...]:
        return self.int_params + self.rational_params


def _nonzero(**kw):
    for name in ("k", "l"):
        if name in kw and kw[name] == 0:
            raise DomainError(f"{name} must be nonzero")
    if "l" in kw and kw["k"] % kw["l"] == 0:
        raise DomainError(f"l={kw['l']} divides k={kw['k']}")


W, V = Signature.WITT, Signature.VIRASORO
PRODUCTS: dict[tuple[str, str], ProductEntry] = {}


def _register(entry: ProductEntry) -> None:
    PRODUCTS[(entry.kind, entry.key)] = entry


for _kind, _table in (
    ("prelie", {
        "W0_ZERO": (W, (), (), lambda sig: [Case("all", lambda x, y: True, _zero)], None),
        "W0_I": (W, ("k",), (), _prelie_w0_i, None),
        "W0_II": (W, ("k",), (), _prelie_w0_ii, _nonzero),
        "W0_III": (W, ("k", "l"), (), _prelie_w0_iii, _nonzero),
        "V0_ZERO": (V, (), (), lambda sig: [Case("all", lambda x, y: True, _zero)], None),
        "V0_DEG0": (V, (), ("alpha", "mu"), _prelie_v0_deg0, None),
        "V0_II": (V, ("k",), (), _prelie_v0_ii, _nonzero),
        "V0_III": (V, ("k",), (), _prelie_v0_iii, _nonzero),
        "V0_IV": (V, ("k",), (), _prelie_v0_iv, _nonzero),
    }),
    ("subadjacent", {
        "W0_ZERO": (W, (), (), lambda sig: [Case("all", lambda x, y: True, _zero)], None),
        "W0_I": (W, ("k",), (), _sub_w0_i, None),
        "W0_II": (W, ("k",), (), _sub_w0_ii, _nonzero),
        "W0_III": (W, ("k", "l"), (), _sub_w0_iii, _nonzero),
        "V0_ZERO": (V, (), (), lambda sig: [Case("all", lambda x, y: True, _zero)], None),
        "V0_DEG0": (V, (), ("alpha", "mu"), _sub_v0_deg0, None),
        "V0_II": (V, ("k",), (), _sub_v0_ii, _nonzero),
        "V0_III": (V, ("k",), (), _sub_v0_iii, _nonzero),
        "V0_IV": (V, ("k",), (), _sub_v0_iv, _nonzero),
    }),
):
    for _key, (_sig, _ints, _rats, _build, _check) in _table.items():
        _register(ProductEntry(_kind, _key, _sig, _ints, _rats, _build, _check or (lambda **_: None)))

for _kind, _cases in (("postlie", _postlie_cases), ("brace", _brace_cases)):
    for _sig, _prefix in ((W, "W1"), (V, "V1")):
        for _shape in ("LE1", "ZERO", "GT1", "EMPTY", "PLUS"):
            _rats = ("alpha",) if _shape == "PLUS" else ()
            if _sig is V and _shape in ("LE1", "GT1", "PLUS"):
                _rats = _rats + ("mu",)
            _register(ProductEntry(
                _kind, f"{_prefix}_{_shape}", _sig, (), _rats,
                (lambda fn, shape: lambda sig, **kw: fn(sig, shape, **kw))(_cases, _shape),
            ))


def product_entry(kind: str, key: str) -> ProductEntry:
    try:
        return PRODUCTS[(kind, key)]
    except KeyError:
        raise DomainError(f"no {kind} catalog product {key!r}") from None


def make_catalog_product(kind: str, key: str, params: Mapping | None = None, **kw):
    """A closed-form catalog product; ``postlie`` returns a :class:`PostLieStructure`."""
    entry = product_entry(kind, key)
    given = dict(params or {}, **kw)
    unknown = set(given) - set(entry.params)
    missing = [p for p in entry.params if p not in given]
    if unknown or missing:
        raise DomainError(f"{kind} {key} takes parameters {list(entry.params)}")
    values = {}
    for p in entry.params:
        v = scalar(given[p])
        if p in entry.int_params:
            if v.denominator != 1:
                raise DomainError(f"{p} must be an integer")
            v = int(v)
        values[p] = v
    entry.check(**values)
    label = key + ("{" + ",".join(f"{p}={format_scalar(Fraction(v))}" for p, v in values.items()) + "}" if values else "")
    product = ClosedForm(entry.sig, f"{kind}:{label}", entry.build(entry.sig, **values))
    if kind == "postlie":
        return PostLieStructure(entry.sig, product)
    return product


# which catalog product each operator family induces, and through which transform

_FLIPPED = {"GEM1": "LE1", "LTM1": "GT1", "MINUS": "PLUS"}


@dataclass(frozen=True)
class CatalogCounterpart:
    kind: str
    key: str
    params: dict
    transform: str  # "shift" or "flip"
    shift: int = 0


def counterpart(member: Member) -> CatalogCounterpart:
    """The closed form matching the product induced by a catalog member.

    Weight-0 members are matched at unit scale (alpha, beta, gamma = 1); the
    other families are matched for all parameters.
    """
    fam = family(member.family)
    p = member.kwargs
    name = member.family
    if fam.weight == 0:
        unit = {"W0_I": "alpha", "W0_II": "beta", "W0_III": "gamma", "V0_II": "alpha", "V0_III": "beta", "V0_IV": "mu"}
        if name in unit and p[unit[name]] != 1:
            raise DomainError(f"{name} is matched at {unit[name]}=1")
        k = p.get("k", 0)
        if name in ("W0_I", "V0_II"):
            return CatalogCounterpart("prelie", name, {"k": k}, "shift", 2 * k)
        if name in ("W0_II", "V0_III"):
            return CatalogCounterpart("prelie", name, {"k": k}, "shift", 2 * k)
        if name == "W0_III":
            return CatalogCounterpart("prelie", name, {"k": k, "l": p["l"]}, "shift", k)
        if name == "V0_DEG0":
            return CatalogCounterpart("prelie", name, {"alpha": p["alpha"], "mu": p["mu"]}, "shift")
        if name == "V0_I":
            return CatalogCounterpart("prelie", "V0_ZERO", {}, "shift")
        if name == "V0_IV":
            return CatalogCounterpart("prelie", name, {"k": k}, "shift")
    if name.endswith("_NULL"):
        raise DomainError(f"{name} has no listed PostLie structure")
    prefix, shape = name.split("_", 1)
    transform = "flip" if shape in _FLIPPED else "shift"
    shape = _FLIPPED.get(shape, shape)
    entry = product_entry("postlie", f"{prefix}_{shape}")
    params = {q: p[q] for q in entry.params}
    return CatalogCounterpart("postlie", f"{prefix}_{shape}", params, transform)


def check_counterpart(member: Member, window: int) -> list:
    """Pairs where the induced product and its closed form disagree under the transform."""
    target = counterpart(member)
    op = member.operator()
    if target.kind == "prelie":
        induced = induced_prelie(op)
        closed = make_catalog_product("prelie", target.key, target.params)
    else:
        induced = induced_postlie(op).circ
        closed = make_catalog_product("postlie", target.key, target.params).circ
    phi = flip_symbol if target.transform == "flip" else (lambda s: shift_symbol(s, target.shift))
    return equal_under(induced, closed, phi, window)


def format_failures(failures: list) -> list[dict]:
    out = []
    for item in failures:
        syms, value = item[0], item[1:]
        row = {"at": [str(s) for s in syms]}
        if len(value) == 1 and isinstance(value[0], tuple):
            value = value[0]
        row["values"] = [str(v) for v in value]
        out.append(row)
    return out


__all__ = [
    "BilinearProduct",
    "Brace",
    "Case",
    "ClosedForm",
    "Commutator",
    "OperatorInduced",
    "PRODUCTS",
    "PostLieStructure",
    "check_counterpart",
    "counterpart",
    "equal_after_flip",
    "equal_after_shift",
    "equal_under",
    "induced_postlie",
    "induced_prelie",
    "make_catalog_product",
    "multiplication_table",
    "postlie_brace",
    "postlie_defects",
    "prelie_defect",
    "product_jacobi_defect",
    "scan_pairs",
    "scan_triples",
    "subadjacent",
    "zero_product",
]
