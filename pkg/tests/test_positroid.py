import pytest

from wldpoles import wld
from wldpoles.exactalg import SetSystem, SymbolicMatrix
from wldpoles.matroid import Matroid
from wldpoles.positroid import (gale_leq, gale_minimal_basis, gale_maximal_basis, necklace, reverse_necklace,
                                necklace_from_bases, necklace_minors, is_minimal, jacobian_dimension, is_boundary_of,
                                cell_descriptor)
from wldpoles.utils import InputError, spawn_rng
from wldpoles.wld import WilsonLoopDiagram

V1 = SetSystem(6, ({1, 2, 4, 5}, {1, 2, 3, 4}))
W13_15 = WilsonLoopDiagram(6, [(1, 3), (1, 5)])


def test_gale_order():
    assert gale_leq({1, 2}, {1, 3}, 1, 4)
    assert not gale_leq({1, 3}, {1, 2}, 1, 4)
    # shifted to start at 3: (3, 4) against (4, 1)
    assert gale_leq({3, 4}, {4, 1}, 3, 4)
    assert not gale_leq({3, 2}, {4, 1}, 3, 4)
    with pytest.raises(InputError):
        gale_leq({1}, {1, 2}, 1, 4)


def test_necklace_goldens():
    assert str(necklace(Matroid.from_system(V1))) == "{12, 23, 34, 45, 51, 12}"
    assert str(necklace(W13_15.set_system())) == "{12, 23, 35, 45, 51, 61}"


def test_uniform_rank_one_necklace():
    I = necklace(Matroid(5, [{1, 2, 3, 4, 5}]))
    assert [set(I[a]) for a in range(1, 6)] == [{1}, {2}, {3}, {4}, {5}]
    assert [set(J) for J in I.reverse] == [{5}, {1}, {2}, {3}, {4}]


def test_necklace_of_rank_zero():
    with pytest.raises(InputError):
        necklace(Matroid(4, []))


def test_cell_of_empty_system():
    d = cell_descriptor(SetSystem(6, ()))
    assert (d.k, d.dimension, d.rows) == (0, 0, [])
    assert d.necklace.elements == ()
    assert d.same_cell(cell_descriptor(WilsonLoopDiagram(6, []).set_system()))


@pytest.mark.parametrize("k, n", [(1, 6), (2, 6), (2, 7)])
def test_greedy_necklace_is_gale_minimal(k, n):
    for W in wld.enumerate(k, n):
        M = Matroid.from_system(W.set_system())
        bases = M.bases()
        I = necklace(M)
        for a in range(1, n + 1):
            assert I[a] == gale_minimal_basis(bases, a, n)
        assert necklace_from_bases(bases, n).elements == I.elements


def test_reverse_necklace_is_gale_maximal():
    M = Matroid(8, [{3, 4, 5, 6}, {2, 3, 5, 6}, {1, 2, 7, 8}])
    bases = M.bases()
    rev = reverse_necklace(M)
    for j in range(1, 9):
        assert rev[j - 1] == gale_maximal_basis(bases, j, 8)


def test_necklace_minors_do_not_vanish():
    I = necklace(Matroid.from_system(V1))
    for p in necklace_minors(SymbolicMatrix(V1), I) + necklace_minors(SymbolicMatrix(V1), I, reverse=True):
        assert not p.is_zero


def test_minimality():
    assert is_minimal(SetSystem(5, ({1, 2, 3, 4},))).minimal
    report = is_minimal(W13_15.set_system())
    assert report.minimal and report.dimension == 6
    assert not is_minimal(SetSystem(6, ({1, 2, 5}, {1, 2, 5, 6}))).minimal
    with pytest.raises(InputError):
        is_minimal(SetSystem(4, ({1, 2, 3, 4}, {2, 4})))


def test_rank_deficient_is_not_minimal():
    report = is_minimal(SetSystem(4, ({1}, {1})), require_positroid=False)
    assert not report.minimal
    assert report.witness["reason"] == "rank"


@pytest.mark.parametrize("k, n", [(1, 5), (1, 6), (1, 7), (1, 8), (2, 6), (2, 7), (2, 8)])
def test_diagrams_have_dimension_3k(k, n):
    for W in wld.enumerate(k, n):
        assert is_minimal(W.set_system()).dimension == 3 * k, W.label


@pytest.mark.parametrize("k, n", [(1, 5), (1, 6), (2, 6), (2, 7)])
def test_jacobian_dimension_of_diagrams(k, n):
    for i, W in enumerate(wld.enumerate(k, n)):
        assert jacobian_dimension(W.set_system(), spawn_rng(0, n, i)) == 3 * k, W.label


def test_jacobian_dimension_sees_non_minimal_systems():
    V = SetSystem(6, ({1, 2, 5}, {1, 2, 5, 6}))
    assert jacobian_dimension(V, spawn_rng(1)) < V.m - V.k


def test_boundary_relation():
    V = W13_15.set_system()
    Vb = SetSystem(6, ({1, 2, 3, 4, 5, 6}, {1, 2}), V.labels)
    strict, evidence = is_boundary_of(Vb, V)
    assert strict
    assert evidence["necklace_index"] is not None
    assert not is_boundary_of(V, V)[0]
    with pytest.raises(InputError):
        is_boundary_of(SetSystem(6, ({1, 2},)), V)


def test_cell_descriptor():
    d = cell_descriptor(W13_15.set_system())
    assert d.to_dict()["necklace"] == [[1, 2], [2, 3], [3, 5], [4, 5], [1, 5], [1, 6]]
    assert d.dimension == 6
    assert d.same_cell(cell_descriptor(W13_15.set_system()))
    assert not d.same_cell(cell_descriptor(V1))
