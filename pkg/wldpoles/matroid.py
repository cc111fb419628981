"""
Transversal matroid of a variable valued matrix: the rank of a column set is the size of a maximum
matching between those columns and the rows whose support meets them.
"""
import itertools
import logging
from dataclasses import dataclass, field

import networkx as nx
from networkx.algorithms import bipartite

from .utils import RankDeficientError, InputError, to_mask, from_mask, is_cyclic_interval

logger = logging.getLogger("wldpoles")


class Matroid:
    def __init__(self, n, supports):
        self.n = n
        self.supports = tuple(frozenset(s) for s in supports)
        self.ground = frozenset(range(1, n + 1))
        for s in self.supports:
            if not s <= self.ground:
                raise InputError("Row support {} outside 1..{}".format(sorted(s), n))
        self._rank = {}
        self._bases = None
        self._circuits = None
        self._cyclic_flats = None

    @classmethod
    def from_system(cls, system):
        return cls(system.n, system.rows)

    @property
    def k(self):
        return len(self.supports)

    def rank(self, S):
        """
        >>> M = Matroid(8, [{3, 4, 5, 6}, {2, 3, 5, 6}, {1, 2, 7, 8}])
        >>> M.rank({7, 8}), M.rank({3, 4}), M.rank(set())
        (1, 2, 0)
        """
        mask = to_mask(S)
        if mask not in self._rank:
            self._rank[mask] = self._matching_rank(from_mask(mask))
        return self._rank[mask]

    def _matching_rank(self, cols):
        if not cols:
            return 0
        G = nx.Graph()
        col_nodes = [("c", c) for c in cols]
        G.add_nodes_from(col_nodes)
        for i, s in enumerate(self.supports):
            for c in cols:
                if c in s:
                    G.add_edge(("c", c), ("r", i))
        matching = bipartite.hopcroft_karp_matching(G, top_nodes=col_nodes)
        return len(matching) // 2

    @property
    def full_rank(self):
        return self.rank(self.ground)

    def is_independent(self, S):
        return self.rank(S) == len(set(S))

    def bases(self):
        if self._bases is None:
            if self.full_rank < self.k:
                raise RankDeficientError("Set system has generic rank {} < {} rows".format(self.full_rank, self.k),
                                         payload={"rows": [sorted(s) for s in self.supports]})
            self._bases = tuple(frozenset(B) for B in itertools.combinations(sorted(self.ground), self.k)
                                if self.rank(B) == self.k)
        return self._bases

    def circuits(self):
        """minimal dependent sets, by increasing size"""
        if self._circuits is None:
            found = []
            for size in range(1, self.full_rank + 2):
                for S in itertools.combinations(sorted(self.ground), size):
                    S = frozenset(S)
                    if any(C <= S for C in found):
                        continue
                    if self.rank(S) < size:
                        found.append(S)
            self._circuits = tuple(found)
        return self._circuits

    def closure(self, S):
        """
        >>> M = Matroid(8, [{3, 4, 5, 6}, {2, 3, 5, 6}, {1, 2, 7, 8}])
        >>> sorted(M.closure({1, 7}))
        [1, 7, 8]
        """
        S = frozenset(S)
        r = self.rank(S)
        return S | frozenset(x for x in self.ground - S if self.rank(S | {x}) == r)

    def is_flat(self, S):
        return self.closure(S) == frozenset(S)

    def flats(self):
        out = []
        for size in range(len(self.ground) + 1):
            for S in itertools.combinations(sorted(self.ground), size):
                if self.is_flat(S):
                    out.append(frozenset(S))
        return out

    def cyclic_flats(self):
        """flats that are unions of circuits; closed under the join cl(A | B)"""
        if self._cyclic_flats is None:
            found = {self.closure(frozenset())}
            found.update(self.closure(C) for C in self.circuits())
            frontier = set(found)
            while frontier:
                new = set()
                for A in frontier:
                    for B in found:
                        J = self.closure(A | B)
                        if J not in found and J not in new:
                            new.add(J)
                found |= new
                frontier = new
            self._cyclic_flats = tuple(sorted(found, key=lambda F: (len(F), sorted(F))))
        return self._cyclic_flats

    def restriction_rank(self, S, F):
        S = frozenset(S)
        if not S <= frozenset(F):
            raise InputError("{} is not inside the restriction {}".format(sorted(S), sorted(F)))
        return self.rank(S)

    def contraction_rank(self, S, F):
        F = frozenset(F)
        return self.rank(frozenset(S) | F) - self.rank(F)

    def components(self):
        """connected components via shared circuits; coloops are singletons"""
        parent = {x: x for x in self.ground}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for C in self.circuits():
            first = min(C)
            for x in C:
                parent[find(x)] = find(first)
        groups = {}
        for x in sorted(self.ground):
            groups.setdefault(find(x), set()).add(x)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def is_connected(self):
        return len(self.components()) <= 1

    def flacets(self):
        """per component C: cyclic flats F, 2 <= |F| < |C|, with M|F and (M|C)/F connected"""
        out = []
        for C in self.components():
            rank_C = self.rank(C)
            for F in self.cyclic_flats():
                F = F & C
                if len(F) < 2 or len(F) >= len(C) or F in out:
                    continue
                if not self.is_flat_in(F, C):
                    continue
                if not _split_free(F, lambda S: self.restriction_rank(S, F)):
                    continue
                rest = C - F
                if not _split_free(rest, lambda S: self.contraction_rank(S, F), total=rank_C - self.rank(F)):
                    continue
                out.append(F)
        return out

    def is_flat_in(self, F, C):
        r = self.rank(F)
        return all(self.rank(F | {x}) > r for x in C - F)

    def is_positroid(self):
        """
        necessary test: components form a non-crossing partition and every flacet is a cyclic interval of its
        component

        >>> Matroid(4, [{1, 2, 3, 4}, {2, 4}]).is_positroid()[0]
        False
        """
        comps = self.components()
        for A, B in itertools.combinations(comps, 2):
            if _blocks_cross(A, B):
                return False, {"reason": "crossing components", "sets": [sorted(A), sorted(B)]}
        for F in self.flacets():
            C = next(c for c in comps if F <= c)
            if not is_cyclic_interval(F, C):
                return False, {"reason": "flacet not a cyclic interval", "sets": [sorted(F), sorted(C)]}
        return True, {}

    def structure(self):
        """cyclic flats, flacets, connectivity and the positroid verdict"""
        by_rank = {}
        for F in self.flats():
            by_rank.setdefault(self.rank(F), []).append(sorted(F))
        positroid, witness = self.is_positroid()
        return FlatReport(flats_by_rank=by_rank,
                          cyclic_flats=[sorted(F) for F in self.cyclic_flats()],
                          flacets=[sorted(F) for F in self.flacets()],
                          connected=self.is_connected(),
                          positroid=positroid,
                          witness=witness)


@dataclass
class FlatReport:
    flats_by_rank: dict = field(default_factory=dict)
    cyclic_flats: list = field(default_factory=list)
    flacets: list = field(default_factory=list)
    connected: bool = True
    positroid: bool = True
    witness: dict = field(default_factory=dict)

    def to_dict(self):
        return {"flats": {str(r): fl for r, fl in sorted(self.flats_by_rank.items())},
                "cyclic_flats": self.cyclic_flats,
                "flacets": self.flacets,
                "connected": self.connected,
                "positroid": self.positroid,
                "witness": self.witness}


def _split_free(X, rank_fn, total=None):
    """no proper nonempty S of X with r(S) + r(X - S) == r(X)"""
    X = sorted(X)
    if len(X) <= 1:
        return True
    total = rank_fn(frozenset(X)) if total is None else total
    first, rest = X[0], X[1:]
    for size in range(0, len(rest)):
        for S in itertools.combinations(rest, size):
            S = frozenset(S) | {first}
            if rank_fn(S) + rank_fn(frozenset(X) - S) == total:
                return False
    return True


def _blocks_cross(A, B):
    for a1, a2 in itertools.combinations(sorted(A), 2):
        inside = [b for b in B if a1 < b < a2]
        outside = [b for b in B if b < a1 or b > a2]
        if inside and outside:
            return True
    return False


def numeric_rank(M, S, rng):
    """rank of the columns S of a random positive evaluation of M_V"""
    from .exactalg import SetSystem, SymbolicMatrix, random_assignment, rank

    matrix = SymbolicMatrix(SetSystem(M.n, M.supports))
    values = matrix.evaluate(random_assignment(matrix.variables(), rng))
    cols = sorted(S)
    return rank([[row[c - 1] for c in cols] for row in values]) if cols else 0
