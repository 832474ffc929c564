"""Brute-force re-derivation of the operator catalogs on a finite window.

The unknowns of a degree-``k`` operator are the values ``f(m)`` for ``m`` in
``[-N, N]`` plus ``theta``, ``mu`` (and ``nu`` at degree 0) on the Virasoro
algebra.  Writing the weight-``lam`` identity on the pair
``(L_{m-k}, L_{n-k})`` gives a few scalar equations, quadratic in the
unknowns; :func:`residual` evaluates them in closed form without going
through :mod:`rotabaxter.operators`.  :func:`solve` finds every solution by
propagation (univariate constraints get solved outright) and branching (on
the two roots of a quadratic, or on a common factor).

Weight-0 solutions are only defined up to scale, so each one is normalized:
the first nonzero ``f`` value, scanning ``0, -k, 1, -1, 2, -2, ...``, is set
to 1.  ``theta``, ``mu`` and ``nu`` are never rescaled.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .algebra import BasisSymbol, C, DomainError, Element, L, Signature, WindowError, cocycle, scalar
from .catalog import FAMILIES, Family, Member
from .operators import HomogeneousOperator, index_order
from .polynomials import Poly, rational_roots

Instance = tuple[int, Union[int, str]]
PARAMS = ("theta", "mu", "nu")


def f_name(m: int) -> str:
    return f"f{m}"


@dataclass(frozen=True)
class EquationSystem:
    sig: Signature
    weight: int
    degree: int
    window: int

    def __post_init__(self):
        if self.sig not in (Signature.WITT, Signature.VIRASORO):
            raise DomainError("equation systems live on the Witt or Virasoro algebra")
        if self.weight not in (0, 1):
            raise DomainError("only weights 0 and 1 are classified")
        if self.window < 1:
            raise DomainError("window must be at least 1")

    @property
    def params(self) -> tuple[str, ...]:
        if not self.sig.has_center:
            return ()
        return PARAMS if self.degree == 0 else PARAMS[:2]

    def unknowns(self) -> list[str]:
        n = self.window
        return [f_name(m) for m in range(-n, n + 1)] + list(self.params)

    def touched(self, m: int, n: int | str) -> tuple[int, ...]:
        k = self.degree
        if n == "C":
            return (m, m + k)
        idx = [m, n, m + n]
        if self.weight:
            idx.append(m + n - k)
        return tuple(idx)

    def admits(self, m: int, n: int | str) -> bool:
        if n == "C" and not self.sig.has_center:
            return False
        return all(abs(i) <= self.window for i in self.touched(m, n))

    def instances(self) -> list[Instance]:
        """Admitted instances, one per unordered pair (the residual is antisymmetric)."""
        w = self.window
        out: list[Instance] = []
        for m in range(-w, w + 1):
            for n in range(m + 1, w + 1):
                if self.admits(m, n):
                    out.append((m, n))
        if self.sig.has_center:
            out.extend((m, "C") for m in range(-w, w + 1) if self.admits(m, "C"))
        return out


def _components(eq: EquationSystem, f, theta, mu, nu, m: int, n: int | str) -> dict[BasisSymbol, object]:
    """Coefficients of the weight-``lam`` defect on ``(L_{m-k}, L_{n-k})`` or ``(L_{m-k}, C)``.

    ``f`` maps an index to a ring value; ``theta, mu, nu`` are ring values.
    Works for Fractions and :class:`Poly` alike.
    """
    k, lam, vir = eq.degree, eq.weight, eq.sig.has_center
    eps = cocycle
    out: dict[BasisSymbol, object] = {}

    def add(sym, value):
        out[sym] = out.get(sym, 0) + value

    def r_center(coef):
        # coef * R(C)
        add(L(k), coef * mu)
        if k == 0:
            add(C, coef * nu)

    if n == "C":
        if not vir:
            return out
        fm = f(m)
        add(L(m + k), fm * mu * (m - k))
        add(C, fm * mu * eps(m, k))
        add(L(m + k), -mu * (m - 2 * k) * f(m + k))
        if m + k == 0:
            add(C, -mu * (m - 2 * k) * theta)
        r_center(-mu * eps(m - k, k))
        return out

    fm, fn = f(m), f(n)
    s = m + n
    add(L(s), fm * fn * (m - n))
    coef_l = fm * (m - n + k) + fn * (m - n - k)
    add(L(s), -coef_l * f(s))
    if vir:
        add(C, fm * fn * eps(m, n))
        if s == 0:
            add(C, -coef_l * theta)
        r_center(-(fm * eps(m, n - k) + fn * eps(m - k, n)))
    if lam:
        add(L(s - k), -lam * (m - n) * f(s - k))
        if vir:
            if s - k == 0:
                add(C, -lam * (m - n) * theta)
            r_center(-lam * eps(m - k, n - k))
    return out


@dataclass(frozen=True)
class SolutionTable:
    """Values of the unknowns on a window; ``None`` marks a free unknown."""

    window: int
    values: tuple[tuple[str, Fraction | None], ...]
    anchor: int | None = None

    @classmethod
    def build(cls, window: int, f: Mapping[int, object] | None = None, anchor: int | None = None,
              free: Iterable[str] = (), **params) -> SolutionTable:
        free = set(free)
        f = f or {}
        values = []
        for m in range(-window, window + 1):
            name = f_name(m)
            values.append((name, None if name in free else scalar(f.get(m, 0))))
        for p in PARAMS:
            if p in params or p in free:
                values.append((p, None if p in free else scalar(params[p])))
        return cls(window, tuple(values), anchor)

    @classmethod
    def from_operator(cls, op: HomogeneousOperator, window: int) -> SolutionTable:
        f = {m: op.f(m) for m in range(-window, window + 1)}
        params = {}
        if op.sig.has_center:
            params = {"theta": op.theta, "mu": op.mu}
            if op.degree == 0:
                params["nu"] = op.nu
        return cls.build(window, f, **params)

    @property
    def mapping(self) -> dict[str, Fraction | None]:
        return dict(self.values)

    def f(self, m: int) -> Fraction | None:
        if abs(m) > self.window:
            raise WindowError(f"index {m} outside window {self.window}")
        return self.mapping[f_name(m)]

    @property
    def free(self) -> list[str]:
        return [k for k, v in self.values if v is None]

    def with_values(self, assignment: Mapping[str, Fraction]) -> SolutionTable:
        return SolutionTable(self.window, tuple((k, assignment.get(k, v)) for k, v in self.values), self.anchor)

    def sort_key(self):
        return tuple((1, Fraction(0)) if v is None else (0, v) for _, v in self.values)

    def subsumes(self, other: SolutionTable) -> bool:
        mine, theirs = self.mapping, other.mapping
        return mine.keys() == theirs.keys() and all(
            v is None or v == theirs[k] for k, v in mine.items()
        )

    def to_json(self) -> dict:
        mapping = self.mapping
        out = {
            "window": self.window,
            "f": {str(m): _fmt(mapping[f_name(m)]) for m in range(-self.window, self.window + 1)},
            "free": self.free,
        }
        for p in PARAMS:
            if p in mapping:
                out[p] = _fmt(mapping[p])
        if self.anchor is not None:
            out["anchor"] = self.anchor
        return out


def _fmt(v: Fraction | None) -> str:
    return "free" if v is None else str(v)


def residual(eq: EquationSystem, table: SolutionTable | Mapping[str, object], m: int, n: int | str) -> Element:
    """The defect on the instance ``(m, n)`` as an element; zero iff it holds."""
    if not eq.admits(m, n):
        raise WindowError(f"instance {(m, n)} is not admitted on window {eq.window}")
    values = table.mapping if isinstance(table, SolutionTable) else {k: scalar(v) for k, v in table.items()}

    def get(name):
        v = values.get(name, Fraction(0))
        if v is None:
            raise DomainError(f"{name} is free; substitute a value first")
        return v

    comps = _components(eq, lambda j: get(f_name(j)), get("theta"), get("mu"), get("nu"), m, n)
    return Element({s: v for s, v in comps.items()})


def _symbolic_constraints(eq: EquationSystem) -> list[Poly]:
    variables = {name: Poly.var(name) for name in eq.unknowns()}
    zero = Poly()

    def get(name):
        return variables.get(name, zero)

    seen: dict[Poly, None] = {}
    for m, n in eq.instances():
        comps = _components(eq, lambda j: get(f_name(j)), get("theta"), get("mu"), get("nu"), m, n)
        for value in comps.values():
            p = Poly.lift(value)
            if p:
                seen.setdefault(_monic(p), None)
    return list(seen)


def _monic(p: Poly) -> Poly:
    lead = p.terms[min(p.terms)]
    return p * (1 / lead) if lead != 1 else p


class _Dead(Exception):
    pass


def _propagate(cons: list[Poly], assign: dict[str, Fraction]) -> list[Poly]:
    while True:
        forced: dict[str, Fraction] = {}
        out: dict[Poly, None] = {}
        for p in cons:
            q = p.subs(assign)
            if not q:
                continue
            if q.is_constant():
                raise _Dead
            out.setdefault(_monic(q), None)
            vs = q.variables()
            if len(vs) == 1:
                (v,) = vs
                roots = rational_roots(*q.univariate(v))
                if not roots:
                    raise _Dead
                if len(roots) == 1:
                    if forced.get(v, roots[0]) != roots[0]:
                        raise _Dead
                    forced[v] = roots[0]
        cons = list(out)
        if not forced:
            return cons
        assign.update(forced)


def _var_key(name: str):
    if name.startswith("f"):
        return (0, int(name[1:]))
    return (1, PARAMS.index(name))


def _search(cons: list[Poly], assign: dict[str, Fraction], found: list[dict[str, Fraction]]) -> None:
    try:
        cons = _propagate(cons, assign)
    except _Dead:
        return
    if not cons:
        found.append(assign)
        return
    # two rational roots of a univariate quadratic
    univ = [p for p in cons if len(p.variables()) == 1]
    if univ:
        p = min(univ, key=lambda q: _var_key(next(iter(q.variables()))))
        (v,) = p.variables()
        for root in rational_roots(*p.univariate(v)):
            _search(cons, {**assign, v: root}, found)
        return
    # a variable dividing every monomial
    for p in sorted(cons, key=lambda q: (len(q.terms), str(q))):
        x = p.common_variable()
        if x is not None:
            _search(cons, {**assign, x: Fraction(0)}, found)
            _search(cons + [p.divide_by(x)], dict(assign), found)
            return
    # a constraint linear in some variable whose coefficient is a nonzero constant
    for p in sorted(cons, key=lambda q: (len(q.terms), str(q))):
        for v in sorted(p.variables(), key=_var_key):
            a, rest = _split_linear(p, v)
            if a is not None:
                expr = rest * (-1 / a)
                sub = [q.substitute(v, expr) for q in cons]
                inner: list[dict[str, Fraction]] = []
                _search(sub, dict(assign), inner)
                for sol in inner:
                    try:
                        sol[v] = expr.evaluate(sol)
                    except KeyError:
                        raise RuntimeError(f"dependent unknown {v} = {expr} is not expressible as fixed/free")
                    found.append(sol)
                return
    raise RuntimeError(f"solver stalled on constraints {[str(p) for p in cons[:5]]}")


def _split_linear(p: Poly, v: str) -> tuple[Fraction | None, Poly]:
    """If ``p = a*v + rest`` with constant ``a`` and ``v`` absent from ``rest``."""
    a = Fraction(0)
    rest = {}
    for mon, c in p.terms.items():
        if v in mon:
            if mon != (v,):
                return None, p
            a += c
        else:
            rest[mon] = c
    return (a if a else None), Poly(rest)


def _anchor_branches(eq: EquationSystem) -> list[tuple[int | None, dict[str, Fraction]]]:
    """Normalization branches for the scaling action at weight 0."""
    w, k = eq.window, eq.degree
    order: list[int] = []
    for m in [0, -k, *index_order(w)]:
        if abs(m) <= w and m not in order:
            order.append(m)
    branches: list[tuple[int | None, dict[str, Fraction]]] = []
    for i, m in enumerate(order):
        fixed = {f_name(p): Fraction(0) for p in order[:i]}
        fixed[f_name(m)] = Fraction(1)
        branches.append((m, fixed))
    branches.append((None, {f_name(p): Fraction(0) for p in order}))
    return branches


TEST_VALUES = (Fraction(-2), Fraction(1, 3), Fraction(5))


def check_solution(eq: EquationSystem, sol: SolutionTable) -> list[tuple[Instance, Element]]:
    """Failures of ``sol`` on admitted instances, trying three values for each free unknown."""
    free = sol.free
    failures = []
    for combo in itertools.product(TEST_VALUES, repeat=len(free)):
        filled = sol.with_values(dict(zip(free, combo)))
        for m, n in eq.instances():
            r = residual(eq, filled, m, n)
            if r:
                failures.append(((m, n), r))
        if failures:
            break
    return failures


def solve(eq: EquationSystem) -> list[SolutionTable]:
    """Every window solution, normalized, deduplicated and canonically sorted."""
    if eq.window < 4:
        raise DomainError("solve needs a window of at least 4")
    cons = _symbolic_constraints(eq)
    unknowns = eq.unknowns()
    branches = _anchor_branches(eq) if eq.weight == 0 else [(None, {})]
    raw: list[tuple[int | None, dict[str, Fraction]]] = []
    for anchor, fixed in branches:
        found: list[dict[str, Fraction]] = []
        _search(cons, dict(fixed), found)
        raw.extend((anchor, sol) for sol in found)
    tables = []
    for anchor, sol in raw:
        values = tuple((u, sol.get(u)) for u in unknowns)
        tables.append(SolutionTable(eq.window, values, anchor))
    unique = sorted(set(tables), key=SolutionTable.sort_key)
    kept = [t for t in unique if not any(o != t and o.subsumes(t) for o in unique)]
    for t in kept:
        bad = check_solution(eq, t)
        if bad:
            raise RuntimeError(f"solver produced a non-solution: {bad[0]}")
    return kept


def extends(sol: SolutionTable, eq: EquationSystem, window: int) -> bool:
    """Whether the fixed values of ``sol`` are the restriction of a solution on a larger window.

    A table that fails to extend is a window artifact: no operator on the whole
    algebra restricts to it.
    """
    if window < eq.window:
        raise DomainError("extension window must contain the original one")
    big = EquationSystem(eq.sig, eq.weight, eq.degree, window)
    fixed = {name: v for name, v in sol.values if v is not None}
    found: list[dict[str, Fraction]] = []
    _search(_symbolic_constraints(big), fixed, found)
    return bool(found)


@dataclass(frozen=True)
class Match:
    family: str
    params: tuple[tuple[str, Fraction | int | None], ...]

    def member(self, free_value: Fraction = Fraction(1)) -> Member:
        return Member.of(self.family, {k: free_value if v is None else v for k, v in self.params})

    def __str__(self) -> str:
        body = ",".join(f"{k}={'free' if v is None else v}" for k, v in self.params)
        return f"{self.family}{{{body}}}"


@dataclass(frozen=True)
class MatchResult:
    matches: tuple[Match, ...] = field(default_factory=tuple)

    @property
    def window_artifact_or_unclassified(self) -> bool:
        return not self.matches

    def to_json(self) -> dict:
        return {
            "matches": [str(m) for m in self.matches],
            "window_artifact_or_unclassified": self.window_artifact_or_unclassified,
        }


def _coords(op: HomogeneousOperator, eq: EquationSystem) -> list[Fraction]:
    w = eq.window
    out = [op.f(m) for m in range(-w, w + 1)]
    values = {"theta": op.theta, "mu": op.mu, "nu": op.nu}
    out.extend(values[p] for p in eq.params)
    return out


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    rows = [r[:] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r] + [row for row in rows[r:] if any(row)], pivots


def _solve_affine(c0, basis, targets, fixed_idx, free_idx):
    """Parameters p with ``c0 + sum p_i basis_i`` hitting targets on fixed coordinates and
    spanning the free coordinates.  Returns (particular, determined flags) or None."""
    nparams = len(basis)
    rows = [[basis[i][j] for i in range(nparams)] + [targets[j] - c0[j]] for j in fixed_idx]
    reduced, pivots = _rref(rows, nparams + 1)
    if any(p == nparams for p in pivots):
        return None
    particular = [Fraction(0)] * nparams
    for row, p in zip(reduced, pivots):
        particular[p] = row[nparams]
    nonpivot = [i for i in range(nparams) if i not in pivots]
    null = []
    for fcol in nonpivot:
        vec = [Fraction(0)] * nparams
        vec[fcol] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[fcol]
        null.append(vec)
    if free_idx:
        image = [[sum(basis[i][j] * vec[i] for i in range(nparams)) for vec in null] for j in free_idx]
        _, piv = _rref(image, len(null))
        if len(piv) < len(free_idx):
            return None
    determined = [all(vec[i] == 0 for vec in null) for i in range(nparams)]
    return particular, determined


def _candidate_ints(fam: Family, eq: EquationSystem) -> list[dict[str, int]]:
    k = eq.degree
    if "k" not in fam.int_params:
        return [{}] if k == 0 else []
    if fam.name.endswith("_NULL"):
        return [{"k": k}] if k else []
    if fam.name in ("W0_II", "V0_III"):
        if k == 0 or k % 2:
            return []
        kk = k // 2
    else:
        kk = k
    if "l" not in fam.int_params:
        return [{"k": kk}]
    bound = 2 * eq.window + abs(kk) + 1
    return [{"k": kk, "l": l} for l in range(2, bound + 1) if kk % l]


def match_catalog(sol: SolutionTable, eq: EquationSystem) -> MatchResult:
    """All catalog members whose window restriction reproduces ``sol``."""
    mapping = sol.mapping
    names = eq.unknowns()
    targets = [mapping.get(n) for n in names]
    fixed_idx = [j for j, t in enumerate(targets) if t is not None]
    free_idx = [j for j, t in enumerate(targets) if t is None]
    matches = []
    for fam in FAMILIES.values():
        if fam.sig is not eq.sig or fam.weight != eq.weight:
            continue
        rats = fam.rational_params
        for ints in _candidate_ints(fam, eq):
            c0 = _coords(fam.build(**ints, **{p: 0 for p in rats}), eq)
            basis = []
            for p in rats:
                unit = _coords(fam.build(**ints, **{q: int(q == p) for q in rats}), eq)
                basis.append([a - b for a, b in zip(unit, c0)])
            solved = _solve_affine(c0, basis, targets, fixed_idx, free_idx)
            if solved is None:
                continue
            particular, determined = solved
            params: dict[str, object] = dict(ints)
            for p, value, det in zip(rats, particular, determined):
                params[p] = value if det else None
            match = Match(fam.name, tuple(params.items()))
            try:
                match.member(Fraction(7, 3)).check()
            except DomainError:
                continue
            matches.append(match)
    return MatchResult(tuple(matches))
