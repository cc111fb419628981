import itertools

import pytest

from wldpoles import wld
from wldpoles.matroid import Matroid
from wldpoles.utils import InputError, CrossingDiagramError, InadmissibleDiagramError
from wldpoles.wld import Propagator, WilsonLoopDiagram

W8 = WilsonLoopDiagram(8, [(3, 5), (2, 5), (1, 7)])


def test_propagator_is_canonical():
    assert Propagator(5, 1) == Propagator(1, 5)
    assert Propagator.from_label("1:5") == Propagator(1, 5)
    with pytest.raises(InputError):
        Propagator(3, 3)


def test_support():
    assert Propagator(2, 8).support(8) == {1, 2, 3, 8}
    assert Propagator(2, 4).support(6) == {2, 3, 4, 5}
    with pytest.raises(InputError):
        Propagator(1, 2).support(6)


def test_consecutive():
    assert Propagator(2, 4).is_consecutive(7)
    assert Propagator(1, 6).is_consecutive(7)
    assert not Propagator(1, 5).is_consecutive(7)
    assert not Propagator(1, 4).is_consecutive(7)


def test_crossing():
    assert Propagator(1, 3).crosses(Propagator(2, 4))
    assert not Propagator(1, 3).crosses(Propagator(1, 5))
    assert not Propagator(1, 7).crosses(Propagator(3, 5))


def test_edge_order():
    assert wld.edge_order(W8, 5) == [Propagator(3, 5), Propagator(2, 5)]
    assert wld.edge_order(W8, 4) == []


def test_edge_order_rejects_crossing():
    with pytest.raises(CrossingDiagramError):
        wld.edge_order(WilsonLoopDiagram(6, [(1, 3), (2, 4)]), 1)


def test_validate():
    assert wld.validate(W8).admissible
    crossing = wld.validate(WilsonLoopDiagram(6, [(1, 3), (2, 4)]))
    assert not crossing.admissible and crossing.crossing_violations
    dense = wld.validate(WilsonLoopDiagram(6, [(1, 3), (1, 3)]))
    assert dense.local_density_violations
    assert not wld.validate(WilsonLoopDiagram(5, [(1, 3), (3, 5)])).global_density_ok
    assert wld.validate(WilsonLoopDiagram(3, [])).admissible


def test_require_admissible_carries_verdict():
    with pytest.raises(InadmissibleDiagramError) as e:
        wld.require_admissible(WilsonLoopDiagram(6, [(1, 3), (2, 4)]))
    assert e.value.payload["crossing_violations"] == [["1:3", "2:4"]]


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_single_propagator_count(n):
    assert len(wld.enumerate(1, n)) == n * (n - 3) // 2


def test_enumerate_edge_cases():
    assert len(wld.enumerate(1, 5)) == 5
    assert wld.enumerate(1, 4) == []
    assert wld.enumerate(0, 6) == [WilsonLoopDiagram(6, [])]
    with pytest.raises(InputError):
        wld.enumerate(-1, 6)


def test_enumerate_is_sorted_and_admissible():
    diagrams = wld.enumerate(2, 7)
    assert diagrams == sorted(diagrams)
    assert all(wld.validate(W).admissible for W in diagrams)


@pytest.mark.parametrize("k, n", [(1, 6), (2, 6), (2, 7)])
def test_rotation_closure(k, n):
    diagrams = set(wld.enumerate(k, n))
    assert {W.rotate(1) for W in diagrams} == diagrams


def test_propagator_flat():
    assert wld.propagator_flat([Propagator(1, 7)], W8) == {1, 7, 8}
    assert wld.propagator_flat([], W8) == frozenset()
    assert wld.propagator_flat(W8.props, W8) == set(range(1, 9))
    assert wld.propagator_flat([(1, 5)], WilsonLoopDiagram(6, [(1, 5), (1, 3)])) == {5, 6}
    with pytest.raises(InputError):
        wld.propagator_flat([Propagator(1, 3)], W8)


def test_propagator_flats_hold_cyclic_flats():
    flats = set(wld.propagator_flats(W8).values())
    M = Matroid.from_system(W8.set_system())
    assert {F for F in M.cyclic_flats() if M.rank(F) < W8.k} <= flats


def test_independence_by_propagators_matches_matching_rank():
    M = Matroid.from_system(W8.set_system())
    for size in range(0, 5):
        for S in itertools.combinations(range(1, 9), size):
            assert wld.independent_by_props(W8, S) == M.is_independent(S)


def test_json_roundtrip_and_labels():
    assert WilsonLoopDiagram.from_dict(W8.to_dict()) == W8
    assert W8.label == "n8[1:7|2:5|3:5]"
    with pytest.raises(InputError):
        WilsonLoopDiagram.from_dict({"n": 6})


def test_set_system_rows_follow_props():
    V = W8.set_system()
    assert V.labels == ("1:7", "2:5", "3:5")
    assert V.rows[0] == {1, 2, 7, 8}
    assert V.m == 12


def test_gauged_matrix_row_supports():
    M = W8.matrix(gauge=True)
    assert M.labels == ("1:7", "2:5", "3:5")
    assert M.row_supports() == (frozenset({0, 1, 2, 7, 8}), frozenset({0, 2, 3, 5, 6}), frozenset({0, 3, 4, 5, 6}))
    assert all(not M.entry(i, 0).is_zero for i in range(M.k))
    assert W8.matrix().row_supports() == tuple(frozenset(s) for s in W8.supports())


@pytest.mark.parametrize("data", [{"n": 6, "props": [[1, "a"]]}, {"n": "six", "props": []},
                                  {"n": 6, "props": [[1]]}, {"n": 6, "props": 4}])
def test_from_dict_rejects_bad_values(data):
    with pytest.raises(InputError):
        WilsonLoopDiagram.from_dict(data)
