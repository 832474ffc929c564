from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotabaxter.algebra import ZERO, C, DomainError, L, Signature, WindowError, parse_element
from rotabaxter.catalog import FAMILIES, grid_members, make_operator
from rotabaxter.operators import (
    HomogeneousOperator,
    Table,
    apply,
    companion,
    lift_to_virasoro,
    lifting_obstruction,
    rb_defect,
    restrict_to_witt,
    verify_rb,
    zero_operator,
)

W, V = Signature.WITT, Signature.VIRASORO


@pytest.mark.parametrize("name,params,x,expected", [
    ("W0_I", {"k": 1, "alpha": 1}, L(-2), "L(-1)"),
    ("W0_III", {"k": 1, "l": 2, "gamma": 1}, L(1), "1/3*L(2)"),
    ("W0_III", {"k": 1, "l": 2, "gamma": 1}, L(0), "0"),
    ("V0_IV", {"k": 3, "mu": 1}, C, "L(3)"),
    ("V0_IV", {"k": 3, "mu": 1}, L(0), "-1/3*L(3)"),
    ("W0_II", {"k": 1, "beta": 1}, L(-3), "2*L(-1)"),
    ("W0_II", {"k": 1, "beta": 1}, L(-2), "L(0)"),
    ("V1_PLUS", {"alpha": 2, "theta": 5, "mu": 0, "nu": 0}, L(0), "2*L(0) + 5*C"),
    ("W1_LE1", {}, L(3), "-1*L(3)"),
    ("W1_LE1", {}, L(1), "0"),
])
def test_apply_examples(name, params, x, expected):
    assert apply(make_operator(name, params), x) == parse_element(expected)


def test_apply_zero_and_domain():
    op = make_operator("W0_I", k=1, alpha=1)
    assert apply(op, ZERO) == ZERO
    with pytest.raises(DomainError):
        apply(op, C)


def test_table_outside_window():
    op = HomogeneousOperator(W, 0, Table.constant(3, 1))
    assert apply(op, L(2)) == parse_element("L(2)")
    with pytest.raises(WindowError):
        apply(op, L(4))


def test_rb_defect_examples():
    le1 = make_operator("W1_LE1")
    assert rb_defect(le1, 1, L(2), L(3)) == ZERO
    ident = HomogeneousOperator(W, 0, Table.constant(5, 1))
    assert rb_defect(ident, 0, L(1), L(2)) == parse_element("L(3)")
    assert rb_defect(zero_operator(V), 1, L(2), C) == ZERO


def test_verify_examples():
    assert verify_rb(make_operator("W0_I", k=1, alpha=1), 0, 10).passed
    assert verify_rb(make_operator("V0_IV", k=2, mu=1), 0, 10).passed
    lifted = lift_to_virasoro(make_operator("W0_III", k=1, l=2, gamma=1))
    report = verify_rb(lifted, 0, 10)
    assert not report.passed
    # images L_m and L_{-m} meet the cocycle
    assert report.failures and all(x.index + y.index == -2 and d == d.coefficient(C) * parse_element("C")
                                   for x, y, d in report.failures)


def test_verify_report_is_sorted_and_symmetric():
    report = verify_rb(HomogeneousOperator(W, 0, Table.constant(8, 1)), 0, 3)
    keys = [(x, y) for x, y, _ in report.failures]
    assert keys == sorted(keys)
    pairs = {(x, y): d for x, y, d in report.failures}
    assert all(pairs[(y, x)] == -d for (x, y), d in pairs.items())


def test_companion():
    assert companion(make_operator("W1_LE1")) == make_operator("W1_GT1")
    assert companion(make_operator("W1_GEM1")) == make_operator("W1_LTM1")
    plus = make_operator("V1_PLUS", alpha=2, theta=1, mu=3, nu=5)
    assert companion(plus) == make_operator("V1_MINUS", alpha=-3, theta=-1, mu=-3, nu=-6)
    with pytest.raises(DomainError):
        companion(make_operator("W0_I", k=1, alpha=1))


@pytest.mark.parametrize("name", [n for n, f in FAMILIES.items() if f.weight == 1 and not n.endswith("NULL")])
def test_companion_involution_preserves_rb(name):
    for member in list(grid_members(name))[:6]:
        op = member.operator()
        assert companion(companion(op)) == op
        assert verify_rb(companion(op), 1, 8).passed


def test_restrict_and_lift():
    assert restrict_to_witt(make_operator("V0_II", k=2, alpha=3)) == make_operator("W0_I", k=2, alpha=3)
    assert lift_to_virasoro(make_operator("W0_I", k=2, alpha=3)) == make_operator("V0_II", k=2, alpha=3)
    assert lift_to_virasoro(make_operator("W1_ZERO")) == make_operator("V1_ZERO")
    op = make_operator("V1_LE1", mu=2, nu=-1)
    assert lift_to_virasoro(restrict_to_witt(op), op.theta, op.mu, op.nu) == op


def test_obstruction():
    report = lifting_obstruction(make_operator("W1_EMPTY"), 5)
    assert report.failures[0] == (2, -2, Fraction(1, 2))
    assert lifting_obstruction(make_operator("W1_LE1"), 8).passed
    assert lifting_obstruction(zero_operator(), 8).passed
    with pytest.raises(DomainError):
        lifting_obstruction(zero_operator(V), 4)


def test_operator_constructor_domain():
    with pytest.raises(DomainError):
        HomogeneousOperator(W, 0, theta=1)
    with pytest.raises(DomainError):
        HomogeneousOperator(V, 1, nu=1)
    with pytest.raises(DomainError):
        HomogeneousOperator(Signature.WITT_SEMIDIRECT, 0)


@pytest.mark.parametrize("name", [n for n, f in FAMILIES.items() if f.weight == 0])
def test_scalar_action(name):
    for member in list(grid_members(name))[:4]:
        for c in (Fraction(-2), Fraction(1, 3)):
            assert verify_rb(member.operator().scaled(c), 0, 6).passed


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from([W, V]),
    st.sampled_from([-2, -1, 1, 3]),
    st.dictionaries(st.integers(-4, 4), st.fractions(min_value=-2, max_value=2, max_denominator=3), min_size=1),
)
def test_no_weight1_operator_at_nonzero_degree(sig, k, values):
    values = {m: v for m, v in values.items() if v}
    if not values:
        return
    op = HomogeneousOperator(sig, k, Table.from_mapping(30, values))
    window = max(abs(m) for m in values) + abs(k)
    assert not verify_rb(op, 1, window).passed


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([m for n in ("W0_III", "V0_IV", "W1_PLUS", "V0_III") for m in grid_members(n)]),
       st.integers(-8, 8))
def test_degree_homogeneity(member, m):
    op = member.operator()
    assert apply(op, L(m)).degrees() <= {m + op.degree}
