"""
Wilson loop diagrams: propagators on the edges of an n-gon, admissibility and enumeration.

Indices are 1-based and cyclic; edge e joins vertices e and e+1 (n+1 == 1).
"""
import itertools
import logging
from dataclasses import dataclass, field

from .utils import (InputError, CrossingDiagramError, InadmissibleDiagramError, cyclic, cyclic_distance)

logger = logging.getLogger("wldpoles")


@dataclass(frozen=True, order=True)
class Propagator:
    e1: int
    e2: int

    def __post_init__(self):
        if self.e1 == self.e2:
            raise InputError("Propagator needs two different edges, got ({}, {})".format(self.e1, self.e2))
        if self.e1 > self.e2:
            e1, e2 = self.e2, self.e1
            object.__setattr__(self, "e1", e1)
            object.__setattr__(self, "e2", e2)

    @property
    def edges(self):
        return self.e1, self.e2

    @property
    def label(self):
        return "{}:{}".format(self.e1, self.e2)

    @classmethod
    def from_label(cls, label):
        try:
            e1, e2 = label.split(":")
            return cls(int(e1), int(e2))
        except ValueError:
            raise InputError("Cannot parse propagator label {}".format(label))

    def other(self, e):
        if e == self.e1:
            return self.e2
        elif e == self.e2:
            return self.e1
        raise InputError("Propagator {} does not end on edge {}".format(self.label, e))

    def is_valid(self, n):
        """
        >>> Propagator(1, 3).is_valid(6), Propagator(1, 6).is_valid(6), Propagator(2, 3).is_valid(6)
        (True, False, False)
        """
        if not (1 <= self.e1 and self.e2 <= n):
            return False
        return (self.e2 - self.e1) not in (1, n - 1)

    def vertices(self, n):
        """the support without validity check; may have fewer than 4 elements"""
        return frozenset({cyclic(self.e1, n), cyclic(self.e1 + 1, n), cyclic(self.e2, n), cyclic(self.e2 + 1, n)})

    def support(self, n):
        if not self.is_valid(n):
            raise InputError("Propagator {} is not valid for n={}".format(self.label, n))
        return self.vertices(n)

    def is_consecutive(self, n):
        """support is four cyclically consecutive vertices"""
        return (self.e2 - self.e1) in (2, n - 2)

    def crosses(self, other):
        """
        chords cross iff their edges strictly interleave; a shared edge is never a crossing
        >>> Propagator(1, 3).crosses(Propagator(2, 4))
        True
        >>> Propagator(1, 3).crosses(Propagator(3, 5))
        False
        """
        a, b = self.edges
        c, d = other.edges
        if len({a, b, c, d}) < 4:
            return False
        return (a < c < b < d) or (c < a < d < b)

    def rotate(self, shift, n):
        return Propagator(cyclic(self.e1 + shift, n), cyclic(self.e2 + shift, n))

    def __str__(self):
        return "({},{})".format(self.e1, self.e2)


def _as_propagator(p):
    if isinstance(p, Propagator):
        return p
    try:
        e1, e2 = p
        return Propagator(int(e1), int(e2))
    except (TypeError, ValueError):
        raise InputError("Cannot read propagator {}".format(p))


@dataclass(frozen=True, order=True)
class WilsonLoopDiagram:
    n: int
    props: tuple = field(default=())

    def __post_init__(self):
        if self.n < 1:
            raise InputError("Diagram needs n >= 1, got {}".format(self.n))
        props = tuple(sorted(_as_propagator(p) for p in self.props))
        for p in props:
            if not (1 <= p.e1 <= self.n and 1 <= p.e2 <= self.n):
                raise InputError("Propagator {} has an edge outside 1..{}".format(p.label, self.n))
        object.__setattr__(self, "props", props)

    @property
    def k(self):
        return len(self.props)

    @property
    def label(self):
        """
        >>> WilsonLoopDiagram(6, [(1, 5), (1, 3)]).label
        'n6[1:3|1:5]'
        """
        return "n{}[{}]".format(self.n, "|".join(p.label for p in self.props))

    def supports(self):
        return tuple(vertex_support(p, self.n) for p in self.props)

    def without(self, p):
        props = list(self.props)
        props.remove(p)
        return WilsonLoopDiagram(self.n, props)

    def replace(self, old, new):
        return WilsonLoopDiagram(self.n, list(self.without(old).props) + [new])

    def set_system(self):
        """V_P: one row per propagator, labelled by the propagator"""
        from .exactalg import SetSystem

        if len(set(self.props)) != len(self.props):
            raise InadmissibleDiagramError("Repeated propagator in {}".format(self.label))
        return SetSystem(self.n, self.supports(), tuple(p.label for p in self.props))

    def matrix(self, gauge=False):
        """M_VP, or M_YP with the gauge column 0"""
        from .exactalg import matrix_from_sets

        return matrix_from_sets(self.set_system(), gauge=gauge)

    def rotate(self, shift):
        return WilsonLoopDiagram(self.n, [p.rotate(shift, self.n) for p in self.props])

    def to_dict(self):
        return {"n": self.n, "props": [[p.e1, p.e2] for p in self.props]}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(int(d["n"]), [tuple(p) for p in d["props"]])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError("Diagram needs fields n and props: {}".format(e))

    def __str__(self):
        return "({{{}}},[{}])".format(",".join(str(p) for p in self.props), self.n)


@dataclass(frozen=True)
class AdmissibilityVerdict:
    crossing_violations: tuple = ()
    local_density_violations: tuple = ()
    global_density_ok: bool = True
    invalid_propagators: tuple = ()

    @property
    def admissible(self):
        return (not self.crossing_violations and not self.local_density_violations and self.global_density_ok
                and not self.invalid_propagators)

    def to_dict(self):
        return {"admissible": self.admissible,
                "crossing_violations": [[p.label, q.label] for p, q in self.crossing_violations],
                "local_density_violations": [[p.label for p in s] for s in self.local_density_violations],
                "global_density_ok": self.global_density_ok,
                "invalid_propagators": [p.label for p in self.invalid_propagators]}


def vertex_support(p, n):
    """
    >>> sorted(vertex_support(Propagator(2, 8), 8))
    [1, 2, 3, 8]
    """
    return p.support(n)


def vertex_support_union(props, n):
    out = set()
    for p in props:
        out |= p.vertices(n)
    return frozenset(out)


def propagator_flat(P, W):
    """
    F(P): complement of the vertices supporting the propagators outside P
    >>> W = WilsonLoopDiagram(8, [(3, 5), (2, 5), (1, 7)])
    >>> sorted(propagator_flat([Propagator(1, 7)], W))
    [1, 7, 8]
    """
    P = [_as_propagator(p) for p in P]
    rest = list(W.props)
    for p in P:
        if p not in rest:
            raise InputError("Propagator {} is not in {}".format(p.label, W.label))
        rest.remove(p)
    return frozenset(range(1, W.n + 1)) - vertex_support_union(rest, W.n)


def propagator_flats(W):
    """F(P) for every proper subset P of the propagators, keyed by the subset"""
    flats = {}
    for size in range(W.k):
        for P in itertools.combinations(W.props, size):
            flats[P] = propagator_flat(P, W)
    return flats


def props_on(S, W):
    """
    propagators whose support meets S
    >>> W = WilsonLoopDiagram(8, [(3, 5), (2, 5), (1, 7)])
    >>> [p.label for p in props_on({2}, W)]
    ['1:7', '2:5']
    """
    S = set(S)
    return tuple(p for p in W.props if p.vertices(W.n) & S)


def independent_by_props(W, S):
    """S is independent iff no subset U of S meets fewer propagators than |U|"""
    S = sorted(S)
    for size in range(1, len(S) + 1):
        for U in itertools.combinations(S, size):
            if len(props_on(U, W)) < size:
                return False
    return True


def edge_order(W, e):
    """
    propagators ending on edge e, nearest to vertex e first

    Sorted by the cyclic distance from vertex e+1 to the far edge, descending.
    >>> W = WilsonLoopDiagram(8, [(3, 5), (2, 5), (1, 7)])
    >>> [p.label for p in edge_order(W, 5)]
    ['3:5', '2:5']
    """
    crossing = crossing_pairs(W.props)
    if crossing:
        raise CrossingDiagramError("No edge order on crossing diagram {}".format(W.label),
                                   payload={"crossing": [[p.label, q.label] for p, q in crossing]})
    incident = [p for p in W.props if e in p.edges]
    return sorted(incident, key=lambda p: cyclic_distance(cyclic(e + 1, W.n), p.other(e), W.n), reverse=True)


def crossing_pairs(props):
    return tuple((p, q) for p, q in itertools.combinations(props, 2) if p.crosses(q))


def validate(W):
    invalid = tuple(p for p in W.props if not p.is_valid(W.n))
    crossing = crossing_pairs(W.props)
    local = []
    # subsets by index, so a repeated propagator counts twice
    for size in range(1, W.k + 1):
        for idx in itertools.combinations(range(W.k), size):
            subset = [W.props[i] for i in idx]
            if len(vertex_support_union(subset, W.n)) < size + 3:
                local.append(tuple(subset))
    global_ok = W.k == 0 or W.n >= W.k + 4
    return AdmissibilityVerdict(crossing_violations=crossing, local_density_violations=tuple(local),
                                global_density_ok=global_ok, invalid_propagators=invalid)


def require_admissible(W):
    verdict = validate(W)
    if not verdict.admissible:
        raise InadmissibleDiagramError("Diagram {} is not admissible".format(W.label), payload=verdict.to_dict())
    return verdict


def valid_propagators(n):
    return [Propagator(a, b) for a, b in itertools.combinations(range(1, n + 1), 2) if Propagator(a, b).is_valid(n)]


def enumerate(k, n):
    """
    all admissible diagrams with k propagators on [n], in canonical order
    >>> len(enumerate(1, 5)), len(enumerate(1, 4)), len(enumerate(0, 3))
    (5, 0, 1)
    """
    if k < 0 or n < 1:
        raise InputError("Need k >= 0 and n >= 1, got k={} n={}".format(k, n))
    if k == 0:
        return [WilsonLoopDiagram(n, ())]
    if n < k + 4:
        return []
    out = []
    for props in itertools.combinations(valid_propagators(n), k):
        W = WilsonLoopDiagram(n, props)
        if validate(W).admissible:
            out.append(W)
    out.sort()
    logger.info("Found {} admissible diagrams for k={} n={}".format(len(out), k, n))
    return out
