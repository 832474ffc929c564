"""Named families of homogeneous Rota-Baxter operators.

Each family has integer slots (``k``, ``l``) and rational slots, an unchecked
builder and a domain check.  Members have a text form such as
``W0_III{k=1,l=2,gamma=1}``.

Families and their shapes (``k`` is the degree unless noted)::

    W0_I      f = alpha at -k                       weight 0, Witt
    W0_II     f = beta at -k, 2*beta at -2k         degree 2k
    W0_III    f(m) = gamma*k/(m+k) on l*Z, l not dividing k
    W1_*      the eight degree-0 weight-1 step shapes
    V0_DEG0   f = alpha at 0, free theta, mu, nu
    V0_I      theta only
    V0_II     as W0_I with alpha != 0
    V0_III    as W0_II plus vartheta at -2k, degree 2k
    V0_IV     R(C) = mu L_k, f(k) = -(k^2-1)/24 * mu
    V1_*      the Witt shapes plus theta, mu, nu as allowed
    *1_NULL   the zero operator at nonzero degree, the only weight-1 option there
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping

from .algebra import DomainError, Signature, scalar
from .operators import (
    CongruenceRational,
    DeltaAt,
    DoubleDelta,
    HomogeneousOperator,
    StepSign,
    Zero,
)

GRID: tuple[Fraction, ...] = tuple(Fraction(x) for x in ("-2", "-1", "-1/2", "1/2", "1", "3"))
K_VALUES: tuple[int, ...] = (-3, -2, -1, 1, 2, 3)
L_VALUES: tuple[int, ...] = (2, 3, 4, 5, -2, -3)

W, V = Signature.WITT, Signature.VIRASORO


@dataclass(frozen=True)
class Family:
    name: str
    sig: Signature
    weight: int
    int_params: tuple[str, ...]
    rational_params: tuple[str, ...]
    build: Callable[..., HomogeneousOperator]
    check: Callable[..., None]
    description: str

    @property
    def params(self) -> tuple[str, ...]:
        return self.int_params + self.rational_params

    def degree(self, k: int = 0) -> int:
        return 2 * k if self.name in ("W0_II", "V0_III") else k


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise DomainError(message)


def _nonzero_k(k, **_):
    _require(k != 0, "k must be nonzero")


def _no_check(**_):
    pass


def _check_w0_ii(k, beta, **_):
    _nonzero_k(k)
    _require(beta != 0, "beta must be nonzero")


def _check_w0_iii(k, l, gamma, **_):
    _nonzero_k(k)
    _require(l != 0, "l must be nonzero")
    _require(k % l != 0, f"l={l} divides k={k}")
    _require(gamma != 0, "gamma must be nonzero")


def _check_v0_ii(k, alpha, **_):
    _nonzero_k(k)
    _require(alpha != 0, "alpha must be nonzero")


def _check_v0_iv(k, mu, **_):
    _nonzero_k(k)
    _require(mu != 0, "mu must be nonzero")


def _congruence(k, l, gamma):
    # unchecked variant used when matching; falls back to zero when l | k
    if l == 0 or k % l == 0:
        return Zero()
    return CongruenceRational(k, l, gamma)


_STEPS = {
    "LE1": ("le1", "zero set m <= 1"),
    "GEM1": ("ge-1", "zero set m >= -1"),
    "ZERO": (None, "zero operator"),
    "GT1": ("gt1", "zero set m > 1"),
    "LTM1": ("lt-1", "zero set m < -1"),
    "EMPTY": ("empty", "minus the identity"),
    "PLUS": ("plus", "-1 for m < 0, alpha at 0"),
    "MINUS": ("minus", "-1 for m > 0, alpha at 0"),
}


def _step(variant, alpha=0):
    if variant is None:
        return Zero()
    if variant in ("plus", "minus"):
        return StepSign(variant, alpha)
    return StepSign(variant)


FAMILIES: dict[str, Family] = {}


def _register(*families: Family) -> None:
    for fam in families:
        FAMILIES[fam.name] = fam


_register(
    Family("W0_I", W, 0, ("k",), ("alpha",),
           lambda k, alpha: HomogeneousOperator(W, k, DeltaAt(-k, alpha)),
           _no_check, "R(L_{-2k}) = alpha L_{-k}"),
    Family("W0_II", W, 0, ("k",), ("beta",),
           lambda k, beta: HomogeneousOperator(W, 2 * k, DoubleDelta(0, -k, beta)),
           _check_w0_ii, "degree 2k: R(L_{-2k}) = beta L_0, R(L_{-3k}) = 2 beta L_{-k}"),
    Family("W0_III", W, 0, ("k", "l"), ("gamma",),
           lambda k, l, gamma: HomogeneousOperator(W, k, _congruence(k, l, gamma)),
           _check_w0_iii, "R(L_m) = gamma k/(m+2k) L_{m+k} when m+k in lZ"),
    Family("V0_DEG0", V, 0, (), ("alpha", "theta", "mu", "nu"),
           lambda alpha, theta, mu, nu: HomogeneousOperator(V, 0, DeltaAt(0, alpha), theta, mu, nu),
           _no_check, "R(L_0) = alpha L_0 + theta C, R(C) = mu L_0 + nu C"),
    Family("V0_I", V, 0, ("k",), ("theta",),
           lambda k, theta: HomogeneousOperator(V, k, Zero(), theta),
           _nonzero_k, "R(L_{-k}) = theta C"),
    Family("V0_II", V, 0, ("k",), ("alpha",),
           lambda k, alpha: HomogeneousOperator(V, k, DeltaAt(-k, alpha)),
           _check_v0_ii, "R(L_{-2k}) = alpha L_{-k}"),
    Family("V0_III", V, 0, ("k",), ("beta", "vartheta"),
           lambda k, beta, vartheta: HomogeneousOperator(V, 2 * k, DoubleDelta(0, -k, beta), vartheta),
           _check_w0_ii, "degree 2k: as W0_II plus R(L_{-2k}) gains vartheta C"),
    Family("V0_IV", V, 0, ("k",), ("mu",),
           lambda k, mu: HomogeneousOperator(V, k, DeltaAt(k, -Fraction(k * k - 1, 24) * mu), 0, mu),
           _check_v0_iv, "R(C) = mu L_k, R(L_0) = -(k^2-1)/24 mu L_k"),
)

for _suffix, (_variant, _desc) in _STEPS.items():
    _register(Family(
        f"W1_{_suffix}", W, 1, (), ("alpha",) if _suffix in ("PLUS", "MINUS") else (),
        (lambda v: lambda alpha=0: HomogeneousOperator(W, 0, _step(v, alpha)))(_variant),
        _no_check, _desc,
    ))

for _suffix, (_variant, _desc) in _STEPS.items():
    if _suffix in ("ZERO", "EMPTY"):
        _vparams: tuple[str, ...] = ()
    elif _suffix in ("PLUS", "MINUS"):
        _vparams = ("alpha", "theta", "mu", "nu")
    else:
        _vparams = ("mu", "nu")
    _register(Family(
        f"V1_{_suffix}", V, 1, (), _vparams,
        (lambda v, empty: lambda alpha=0, theta=0, mu=0, nu=0: HomogeneousOperator(
            V, 0, _step(v, alpha), theta, mu, -1 if empty else nu))(_variant, _suffix == "EMPTY"),
        _no_check, _desc,
    ))


_register(
    Family("W1_NULL", W, 1, ("k",), (), lambda k: HomogeneousOperator(W, k, Zero()),
           _nonzero_k, "zero operator at nonzero degree"),
    Family("V1_NULL", V, 1, ("k",), (), lambda k: HomogeneousOperator(V, k, Zero()),
           _nonzero_k, "zero operator at nonzero degree"),
)


def family(name: str) -> Family:
    try:
        return FAMILIES[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}") from None


@dataclass(frozen=True)
class Member:
    """A family together with a full parameter assignment."""

    family: str
    params: tuple[tuple[str, Fraction | int], ...]

    @classmethod
    def of(cls, name: str, params: Mapping[str, object] | None = None, **kw) -> Member:
        fam = family(name)
        given = dict(params or {}, **kw)
        unknown = set(given) - set(fam.params)
        if unknown:
            raise DomainError(f"{name} has no parameter(s) {sorted(unknown)}")
        missing = [p for p in fam.params if p not in given]
        if missing:
            raise DomainError(f"{name} needs parameter(s) {missing}")
        values = []
        for p in fam.params:
            if p in fam.int_params:
                v = scalar(given[p])
                if v.denominator != 1:
                    raise DomainError(f"{p} must be an integer")
                values.append((p, int(v)))
            else:
                values.append((p, scalar(given[p])))
        return cls(name, tuple(values))

    @property
    def kwargs(self) -> dict:
        return dict(self.params)

    def check(self) -> None:
        family(self.family).check(**self.kwargs)

    def operator(self) -> HomogeneousOperator:
        self.check()
        return family(self.family).build(**self.kwargs)

    def __str__(self) -> str:
        body = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.family}{{{body}}}"


def make_operator(name: str, params: Mapping[str, object] | None = None, **kw) -> HomogeneousOperator:
    """Build a catalog operator; out-of-domain parameters raise :class:`DomainError`."""
    return Member.of(name, params, **kw).operator()


_MEMBER_RE = re.compile(r"^\s*([A-Z0-9_]+)\s*(?:\{(.*)\})?\s*$")


def parse_member(text: str) -> Member:
    match = _MEMBER_RE.match(text)
    if not match:
        raise DomainError(f"malformed family id {text!r}")
    params = {}
    body = (match.group(2) or "").strip()
    if body:
        for part in body.split(","):
            key, sep, value = part.partition("=")
            if not sep:
                raise DomainError(f"malformed parameter {part!r}")
            params[key.strip()] = value.strip()
    return Member.of(match.group(1), params)


def grid_members(name: str) -> Iterator[Member]:
    """Members with every pair of rational slots covering the grid, integer slots
    from a fixed small range, skipping out-of-domain combinations."""
    fam = family(name)
    ints = []
    for p in fam.int_params:
        if p == "l":
            ints.append(L_VALUES)
        else:
            ints.append((0,) + K_VALUES if fam.name == "W0_I" else K_VALUES)
    rats = fam.rational_params
    g = len(GRID)
    if len(rats) <= 1:
        rat_choices = [dict(zip(rats, (v,))) for v in GRID] if rats else [{}]
    else:
        rat_choices = []
        for i, j in itertools.product(range(g), repeat=2):
            assignment = {rats[0]: GRID[i], rats[1]: GRID[j]}
            for extra, p in enumerate(rats[2:], start=2):
                assignment[p] = GRID[(i * extra + j) % g]
            rat_choices.append(assignment)
    for int_values in itertools.product(*ints):
        base = dict(zip(fam.int_params, int_values))
        for rat in rat_choices:
            member = Member.of(name, {**base, **rat})
            try:
                member.check()
            except DomainError:
                continue
            yield member
