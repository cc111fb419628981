import pytest

from wldpoles import wld, poles
from wldpoles.exactalg import SetSystem, SymbolicMatrix, var_poly
from wldpoles.poles import (PoleFactor, RPolynomial, r_poly_edge, r_poly_necklace, check_r_equalities,
                            require_in_r, quad_far_edges, factor_codim, limit_matrix, span_growth,
                            vanish_on_boundary_witness, boundary_without_pole, classify_factors,
                            CODIM_ONE, CODIM_HIGHER)
from wldpoles.utils import InputError, FactorNotInRError, UnstructuredResidualError, RMismatchError, spawn_rng
from wldpoles.wld import WilsonLoopDiagram

V1 = SetSystem(6, ({1, 2, 4, 5}, {1, 2, 3, 4}))
V2 = SetSystem(6, ({1, 2, 4, 5}, {2, 3, 4, 5}))
W13_15 = WilsonLoopDiagram(6, [(1, 3), (1, 5)])
W14_15 = WilsonLoopDiagram(6, [(1, 4), (1, 5)])
W_TRIPLE = WilsonLoopDiagram(8, [(1, 3), (1, 5), (3, 5)])

var = PoleFactor.var
quad = PoleFactor.quad


def test_factor_labels():
    assert var("1:4", 4).label == "x[1:4,4]"
    assert quad("1:5", "1:3", 1, 6).label == "D[1:3|1:5;1,2]"
    assert quad("1:3", "1:5", 6, 6).edge == 6
    assert PoleFactor.from_dict(quad("1:3", "1:5", 6, 6).to_dict(), 6) == quad("1:3", "1:5", 6, 6)


def test_from_polynomial():
    assert PoleFactor.from_polynomial(var_poly("2", 3), 6) == var("2", 3)
    d = quad("1", "2", 6, 6).polynomial()
    assert PoleFactor.from_polynomial(d, 6) == quad("1", "2", 6, 6)
    with pytest.raises(UnstructuredResidualError):
        PoleFactor.from_polynomial(var_poly("1", 1) + var_poly("2", 2), 6)


def test_edge_formula_single_propagator():
    R = r_poly_edge(WilsonLoopDiagram(6, [(2, 4)]))
    assert R.factor_set() == {var("2:4", c) for c in (2, 3, 4, 5)}
    assert R.provenance == "edge-formula"


def test_edge_formula_with_shared_edge():
    R = r_poly_edge(W13_15)
    assert quad("1:3", "1:5", 1, 6) in R
    assert var("1:5", 2) in R and var("1:3", 1) in R
    assert len(R.factors) == 7


def test_necklace_formula_goldens():
    assert r_poly_necklace(V1).factor_set() == {var("1", 2), quad("1", "2", 1, 6), var("2", 1), var("2", 3),
                                                var("2", 4), var("1", 4), var("1", 5)}
    assert r_poly_necklace(V2).factor_set() == {var("1", 1), var("1", 2), var("2", 2), var("2", 3), var("2", 5),
                                                quad("1", "2", 4, 6), var("1", 4)}


def test_necklace_does_not_determine_r():
    assert r_poly_necklace(V1).factor_set() != r_poly_necklace(V2).factor_set()


def test_empty_diagram_has_trivial_r():
    W = WilsonLoopDiagram(5, [])
    assert r_poly_edge(W).factors == ()
    assert r_poly_necklace(W).product() == 1


SWEEP = [(1, 5), (1, 6), (1, 7), (1, 8), (2, 6), (2, 7), (2, 8)]


@pytest.mark.parametrize("k, n", SWEEP)
def test_three_formulas_agree(k, n):
    for W in wld.enumerate(k, n):
        assert check_r_equalities(W)["equal"], W.label


def test_mismatch_is_reported(monkeypatch):
    assert check_r_equalities(W13_15)["equal"]
    monkeypatch.setattr(poles, "r_poly_necklace", lambda W, reverse=False: RPolynomial((), "necklace-radical"))
    report = check_r_equalities(W13_15, raise_on_mismatch=False)
    assert not report["equal"]
    with pytest.raises(RMismatchError):
        check_r_equalities(W13_15)


def test_require_in_r():
    require_in_r(W14_15, var("1:4", 4))
    with pytest.raises(FactorNotInRError):
        require_in_r(W14_15, var("1:4", 3))


def test_quad_far_edges():
    assert quad_far_edges(W13_15, quad("1:3", "1:5", 1, 6)) == (3, 5)


def test_var_codim_higher():
    assert factor_codim(W14_15, var("1:4", 4)) == CODIM_HIGHER
    assert factor_codim(W14_15, var("1:4", 4), rng=spawn_rng(0)) == CODIM_HIGHER


def test_quad_codim():
    f = quad("1:3", "1:5", 1, 6)
    assert factor_codim(W13_15, f) == CODIM_ONE
    assert factor_codim(W13_15, f, rng=spawn_rng(1)) == CODIM_ONE
    g = quad("1:3", "1:5", 1, 8)
    assert factor_codim(W_TRIPLE, g) == CODIM_HIGHER
    assert factor_codim(W_TRIPLE, g, rng=spawn_rng(2)) == CODIM_HIGHER


@pytest.mark.parametrize("k, n", [(1, 5), (2, 6)])
def test_codim_agrees_with_jacobian_dimension(k, n):
    for i, W in enumerate(wld.enumerate(k, n)):
        for f in r_poly_edge(W).factors:
            assert factor_codim(W, f, rng=spawn_rng(3, i)) in (CODIM_ONE, CODIM_HIGHER)


def test_single_row_span_growth():
    M = SymbolicMatrix(SetSystem(5, ({1, 2, 3, 4},)))
    report = span_growth(M, spawn_rng(0))
    assert report.holds and report.span_condition
    assert report.expected == 3


def test_limit_matrix():
    M = limit_matrix(W13_15, quad("1:3", "1:5", 1, 6))
    assert M.minor(None, [1, 2]).is_zero
    assert not M.minor(None, [1, 3]).is_zero
    assert limit_matrix(W14_15, var("1:4", 4)).entry(0, 4).is_zero


@pytest.mark.parametrize("k, n", SWEEP)
def test_every_factor_vanishes_on_a_boundary(k, n):
    for i, W in enumerate(wld.enumerate(k, n)):
        for j, f in enumerate(r_poly_edge(W).factors):
            assert vanish_on_boundary_witness(W, f, spawn_rng(5, i, j))["vanishing"]


def test_boundary_without_pole():
    certs = boundary_without_pole(W13_15)
    assert len(certs) == 1
    cert = certs[0]
    assert cert.valid
    assert cert.rows.support_key() == ((1, 2), (1, 2, 3, 4, 5, 6))
    assert cert.implication == "certified"
    pivot = cert.pivot
    assert (pivot["v"], pivot["I_v"], pivot["I_v_boundary"]) == (3, [3, 5], [1, 3])
    assert (pivot["w"], pivot["I_w"]) == (5, [1, 5])


def test_boundary_without_pole_needs_two_propagators():
    assert boundary_without_pole(WilsonLoopDiagram(6, [(2, 4)])) == []


def test_inadmissible_input():
    with pytest.raises(InputError):
        r_poly_edge(WilsonLoopDiagram(6, [(1, 3), (2, 4)]))


def test_classify_factors():
    rows = classify_factors(W14_15)
    assert len(rows) == len(r_poly_edge(W14_15).factors)
    row = next(r for r in rows if r["label"] == "x[1:4,4]")
    assert row["codim"] == CODIM_HIGHER
    assert row["case"] == "Case1a"
