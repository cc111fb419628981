from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from wldpoles.exactalg import (VarId, Polynomial, SetSystem, SymbolicMatrix, matrix_from_sets, var_poly, det2,
                               bareiss_det, rank, nullspace, structured_factorize, pair_reparameterization,
                               jacobian_det, assignment_to_dict, assignment_from_dict, random_assignment, evaluate)
from wldpoles.utils import InputError, MissingVariableError, spawn_rng

VARS = [VarId("1", 1), VarId("1", 2), VarId("2", 1), VarId("2", 2)]

terms = st.lists(st.tuples(st.integers(-5, 5), st.integers(0, 3), st.integers(0, 2)), max_size=4)


def build(term_list):
    p = Polynomial()
    for c, v, e in term_list:
        p = p + c * Polynomial.variable(VARS[v]) ** e
    return p


@settings(max_examples=50)
@given(terms, terms, terms)
def test_ring_laws(a, b, c):
    a, b, c = build(a), build(b), build(c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - a).is_zero


@settings(max_examples=50)
@given(terms, terms)
def test_products_agree_with_sympy(a, b):
    a, b = build(a), build(b)
    assert sympy.expand((a * b).to_sympy() - a.to_sympy() * b.to_sympy()) == 0


@settings(max_examples=50)
@given(terms, terms)
def test_division_identity(a, b):
    a, b = build(a), build(b)
    if b.is_zero:
        return
    q, r = a.divide(b)
    assert q * b + r == a


def test_divide_by_zero():
    with pytest.raises(InputError):
        var_poly("1", 1).divide(Polynomial())


def test_evaluate_needs_every_variable():
    p = var_poly("1", 1) * var_poly("1", 2)
    assert p.evaluate({VarId("1", 1): 2, VarId("1", 2): Fraction(1, 3)}) == Fraction(2, 3)
    with pytest.raises(MissingVariableError):
        p.evaluate({VarId("1", 1): 2})


def test_symbolic_matrix_layout():
    M = SymbolicMatrix(SetSystem(4, ({1, 2, 3}, {2, 4})))
    assert M.entry(1, 1).is_zero
    assert M.entry(1, 4) == var_poly("2", 4)
    assert M.row_supports() == (frozenset({1, 2, 3}), frozenset({2, 4}))
    gauged = SymbolicMatrix(SetSystem(4, ({1, 2},)), gauge=True)
    assert gauged.columns == (0, 1, 2, 3, 4)
    assert gauged.entry(0, 0) == var_poly("1", 0)


def test_minor_alternates():
    M = SymbolicMatrix(SetSystem(4, ({1, 2, 3, 4}, {1, 2, 3, 4})))
    assert M.minor(None, [1, 2]) == -M.minor(None, [2, 1])
    assert M.minor(None, [1, 2]) == det2("1", "2", 1, 2)
    assert M.minor(None, [3, 3]).is_zero


def test_nonzero_minors_are_transversal_bases():
    M = SymbolicMatrix(SetSystem(4, ({1, 2}, {2, 3})))
    assert set(M.nonzero_minors()) == {frozenset(s) for s in ({1, 2}, {1, 3}, {2, 3})}


def test_set_system_checks():
    with pytest.raises(InputError):
        SetSystem(3, ({1, 4},))
    with pytest.raises(InputError):
        SetSystem(3, ({1}, {2}), ("a", "a"))
    with pytest.raises(InputError):
        matrix_from_sets([])
    V = SetSystem(5, ({1, 2, 3}, {3, 4}))
    assert V.remove_entry("1", 2).rows[0] == {1, 3}
    with pytest.raises(InputError):
        V.remove_entry("2", 1)
    assert SetSystem.from_dict(V.to_dict()) == V


@settings(max_examples=40)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_bareiss_matches_sympy(rows):
    assert bareiss_det(rows) == Fraction(int(sympy.Matrix(rows).det()))


@settings(max_examples=40)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=3))
def test_nullspace(rows):
    basis = nullspace(rows)
    assert len(basis) == 4 - rank(rows)
    for v in basis:
        assert all(sum(Fraction(a) * x for a, x in zip(r, v)) == 0 for r in rows)


def test_structured_factorize_recovers_factors():
    x11, x23 = var_poly("1", 1), var_poly("2", 3)
    d = det2("1", "2", 1, 2)
    f = x11 * x11 * d * x23 * 3
    fac = structured_factorize(f)
    assert fac.structured
    assert fac.recompose() == f
    assert dict(fac.factors) == {x11: 2, x23: 1, d: 1}


def test_structured_factorize_leaves_residual():
    f = var_poly("1", 1) + var_poly("2", 2)
    fac = structured_factorize(f * var_poly("1", 3))
    assert not fac.structured
    assert fac.residual == f


def test_pair_reparameterization_maps_quad_to_product():
    r = pair_reparameterization("1:3", "1:5", 1, 2)
    assert r.jacobian() == Polynomial.variable(r.x)
    assert r.apply(det2("1:3", "1:5", 1, 2)) == Polynomial.variable(r.x) * Polynomial.variable(r.w)


def test_jacobian_of_scaling():
    a = VarId("1", 1)
    assert jacobian_det([a], [a], {a: 3 * Polynomial.variable(a)}).constant_value == 3
    with pytest.raises(InputError):
        jacobian_det([a], [], {})


def test_assignment_dicts():
    point = random_assignment(VARS, spawn_rng(1))
    assert assignment_from_dict(assignment_to_dict(point)) == point
    assert all(x > 0 for x in point.values())


def test_degenerate_point_of_two_row_matrix():
    M = SymbolicMatrix(SetSystem(6, ({1, 2, 4, 5}, {1, 2, 5, 6}), ("p", "q")))
    ones = {v: 1 for v in M.variables()}
    values, r = evaluate(M, ones)
    assert values == [[1, 1, 0, 1, 1, 0], [1, 1, 0, 0, 1, 1]]
    assert r == 2
    assert evaluate(M.minor(None, [1, 2]), ones) == 0
    assert evaluate(M.minor(None, [1, 4]), ones) != 0


def test_zero_assignment_has_rank_zero():
    M = SymbolicMatrix(SetSystem(4, ({1, 2}, {2, 3})))
    assert evaluate(M, {v: 0 for v in M.variables()})[1] == 0


def test_jacobian_chain_rule():
    r = pair_reparameterization("p", "q", 1, 2)
    u = [VarId("u", i) for i in range(1, 5)]
    U1, U2, U3, U4 = (Polynomial.variable(v) for v in u)
    x, y, z, w = r.new
    inner = {x: U1 + U2, y: U2, z: U3 * U1, w: U4 + U1 * U2}
    composite = {old: Polynomial.coerce(p).substitute(inner) for old, p in r.subst.items()}
    outer = jacobian_det(r.new, u, inner)
    assert jacobian_det(r.old, u, composite) == r.jacobian().substitute(inner) * outer
    assert outer == U1


@pytest.mark.parametrize("data", [{"n": 6, "rows": [[1, "x"]]}, {"n": "six", "rows": [[1, 2]]},
                                  {"n": 6, "rows": [[None]]}, {"rows": [[1]]}])
def test_set_system_from_dict_rejects_bad_values(data):
    with pytest.raises(InputError):
        SetSystem.from_dict(data)
