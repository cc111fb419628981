"""
Gale orders, Grassmann necklaces, minimal representations and boundary relations of positroid cells.
"""
import itertools
import logging
from dataclasses import dataclass, field

from .exactalg import PolyMatrix, SetSystem, SymbolicMatrix, random_assignment, rank
from .matroid import Matroid
from .utils import InputError, cyclic_distance, shifted_order

logger = logging.getLogger("wldpoles")


def _shifted(S, a, n):
    return sorted(S, key=lambda x: cyclic_distance(a, x, n))


def gale_leq(A, B, a, n):
    """
    A <=_a B: componentwise after sorting both in the order a < a+1 < ... < a-1
    >>> gale_leq({1, 3}, {2, 3}, 1, 4)
    True
    >>> gale_leq({2, 5}, {3, 4}, 1, 6), gale_leq({3, 4}, {2, 5}, 1, 6)
    (False, False)
    """
    if len(A) != len(B):
        raise InputError("Gale order needs equal sizes, got {} and {}".format(sorted(A), sorted(B)))
    return all(cyclic_distance(a, s, n) <= cyclic_distance(a, t, n)
               for s, t in zip(_shifted(A, a, n), _shifted(B, a, n)))


def gale_minimal_basis(bases, a, n):
    """the basis below every other basis in <=_a, by exhaustive comparison"""
    for B in bases:
        if all(gale_leq(B, C, a, n) for C in bases):
            return frozenset(B)
    raise InputError("No Gale-minimal element for shift {}".format(a))


def gale_maximal_basis(bases, a, n):
    for B in bases:
        if all(gale_leq(C, B, a, n) for C in bases):
            return frozenset(B)
    raise InputError("No Gale-maximal element for shift {}".format(a))


@dataclass(frozen=True)
class GrassmannNecklace:
    n: int
    k: int
    elements: tuple
    reverse: tuple = ()

    def __getitem__(self, a):
        """I_a, 1-based"""
        return self.elements[a - 1]

    def differs(self, other):
        """first index a with I_a != I'_a, or None"""
        for a, (A, B) in enumerate(zip(self.elements, other.elements), start=1):
            if A != B:
                return a
        return None

    def to_dict(self):
        return {"necklace": [sorted(I) for I in self.elements],
                "reverse_necklace": [sorted(I) for I in self.reverse]}

    def __str__(self):
        return "{" + ", ".join("".join(str(x) for x in _shifted(I, a, self.n))
                               for a, I in enumerate(self.elements, start=1)) + "}"


def _as_matroid(M):
    if isinstance(M, Matroid):
        return M
    if isinstance(M, SetSystem):
        return Matroid.from_system(M)
    raise InputError("Cannot build a matroid from {}".format(type(M)))


def necklace(M):
    """
    greedy scan of the columns in the a-th cyclic order, keeping rank-increasing columns
    >>> str(necklace(Matroid(6, [{1, 2, 4, 5}, {1, 2, 3, 4}])))
    '{12, 23, 34, 45, 51, 12}'
    """
    M = _as_matroid(M)
    if M.full_rank == 0:
        raise InputError("Necklace of a rank 0 matroid is undefined")
    elements = tuple(_greedy(M, shifted_order(a, M.n)) for a in range(1, M.n + 1))
    return GrassmannNecklace(M.n, M.full_rank, elements, reverse_necklace(M))


def reverse_necklace(M):
    """I*_j: scan j-1, j-2, ..., j"""
    M = _as_matroid(M)
    return tuple(_greedy(M, list(reversed(shifted_order(j, M.n)))) for j in range(1, M.n + 1))


def _greedy(M, order):
    chosen = frozenset()
    r = 0
    for c in order:
        s = M.rank(chosen | {c})
        if s > r:
            chosen, r = chosen | {c}, s
    return chosen


def necklace_from_bases(bases, n):
    """necklace and reverse necklace of an arbitrary basis collection"""
    bases = [frozenset(B) for B in bases]
    if not bases:
        raise InputError("Empty basis collection")
    k = len(bases[0])
    elements = tuple(gale_minimal_basis(bases, a, n) for a in range(1, n + 1))
    reverse = tuple(gale_maximal_basis(bases, a, n) for a in range(1, n + 1))
    return GrassmannNecklace(n, k, elements, reverse)


def necklace_minors(M, I, reverse=False):
    elements = I.reverse if reverse else I.elements
    return [M.minor(None, sorted(cols)) for cols in elements]


@dataclass
class MinimalityReport:
    minimal: bool
    dimension: int = None
    bound: int = None
    witness: dict = field(default_factory=dict)

    def to_dict(self):
        return {"minimal": self.minimal, "dimension": self.dimension, "bound": self.bound,
                "witness": self.witness}


def is_minimal(V, require_positroid=True):
    """
    |union T| >= max |t| + |T| - 1 for every nonempty subfamily T, at full generic rank
    >>> is_minimal(SetSystem(6, ({1, 2, 5}, {1, 2, 5, 6}))).minimal
    False
    """
    M = Matroid.from_system(V)
    bound = V.m - V.k
    if M.full_rank < V.k:
        return MinimalityReport(False, None, bound, {"reason": "rank", "rank": M.full_rank})
    if require_positroid:
        positroid, witness = M.is_positroid()
        if not positroid:
            raise InputError("Set system does not define a positroid", payload=witness)
    for size in range(2, V.k + 1):
        for idx in itertools.combinations(range(V.k), size):
            rows = [V.rows[i] for i in idx]
            union = frozenset().union(*rows)
            if len(union) < max(len(r) for r in rows) + size - 1:
                return MinimalityReport(False, None, bound,
                                        {"reason": "subfamily", "rows": [V.labels[i] for i in idx]})
    return MinimalityReport(True, bound, bound)


def jacobian_dimension(V, rng, points=2):
    """dim L(M): rank of the Jacobian of the nonzero maximal minors at random points, minus one"""
    if isinstance(V, PolyMatrix):
        matrix = V
    else:
        matrix = SymbolicMatrix(V)
    variables = matrix.variables()
    minors = [matrix.minor(None, cols) for cols in itertools.combinations(matrix.columns, matrix.k)]
    minors = [p for p in minors if not p.is_zero]
    if not minors:
        return -1
    jac = [[p.derivative(v) for v in variables] for p in minors]
    best = 0
    for _ in range(points):
        point = random_assignment(variables, rng)
        best = max(best, rank([[d.evaluate(point) for d in row] for row in jac]))
    logger.debug("Jacobian dimension on {} variables: {}".format(len(variables), best - 1))
    return best - 1


def is_boundary_of(Vb, V):
    """
    bases(Vb) strictly inside bases(V); evidence is the first differing necklace index
    >>> V = SetSystem(6, ({1, 2, 5, 6}, {1, 2, 3, 4}))
    >>> is_boundary_of(V, V)[0]
    False
    """
    Mb, M = _as_matroid(Vb), _as_matroid(V)
    if Mb.full_rank != M.full_rank or Mb.n != M.n:
        raise InputError("Boundary test needs equal rank and ground set, got ({}, {}) and ({}, {})".format(
            Mb.full_rank, Mb.n, M.full_rank, M.n))
    Bb, B = set(Mb.bases()), set(M.bases())
    contained = Bb <= B
    strict = contained and Bb != B
    evidence = {"bases_contained": contained, "strict": strict, "necklace_index": None}
    if strict:
        evidence["necklace_index"] = necklace(Mb).differs(necklace(M))
    return strict, evidence


@dataclass
class CellDescriptor:
    k: int
    n: int
    rows: list
    necklace: GrassmannNecklace
    dimension: int = None

    def same_cell(self, other):
        return self.necklace.elements == other.necklace.elements

    def to_dict(self):
        d = {"k": self.k, "n": self.n, "rows": self.rows, "dimension": self.dimension}
        d.update(self.necklace.to_dict())
        return d


def cell_descriptor(V):
    """
    >>> cell_descriptor(SetSystem(5, ())).to_dict()
    {'k': 0, 'n': 5, 'rows': [], 'dimension': 0, 'necklace': [], 'reverse_necklace': []}
    """
    if V.k == 0:
        # the point Gr(0, n)
        return CellDescriptor(0, V.n, [], GrassmannNecklace(V.n, 0, ()), 0)
    report = is_minimal(V, require_positroid=False)
    return CellDescriptor(V.k, V.n, [sorted(r) for r in V.rows], necklace(Matroid.from_system(V)),
                          report.dimension)
