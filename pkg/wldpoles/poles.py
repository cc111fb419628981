"""
Spurious pole factors of a Wilson loop diagram.

The denominator R(V_P) is built twice: from the per-edge product over the propagators ending on each edge,
and as the distinct structured factors of the necklace minors of M_VP. Each factor is then classified by the
codimension of its vanishing locus inside the positroid cell.
"""
import itertools
import logging
from dataclasses import dataclass, field

from . import wld
from .exactalg import (Polynomial, VarId, SetSystem, SymbolicMatrix, det2, var_poly, structured_factorize,
                       random_assignment, assignment_to_dict)
from .matroid import Matroid
from .positroid import necklace, necklace_minors, is_minimal, is_boundary_of, jacobian_dimension, _shifted
from .utils import (InputError, FindingError, FactorNotInRError, RMismatchError, UnstructuredResidualError,
                    InconsistencyError, cyclic, is_cyclic_interval, interval_start)

logger = logging.getLogger("wldpoles")

CODIM_ONE = "1"
CODIM_HIGHER = ">=2"


@dataclass(frozen=True, order=True)
class PoleFactor:
    """
    a single entry x[row,col], or the 2x2 determinant of rows (a, b) on the columns of one edge
    >>> PoleFactor.quad("1:3", "1:5", 6, 6).cols
    (1, 6)
    >>> PoleFactor.quad("1:3", "1:5", 6, 6).edge
    6
    """
    kind: str
    rows: tuple
    cols: tuple

    @classmethod
    def var(cls, row, col):
        return cls("var", (str(row),), (int(col),))

    @classmethod
    def quad(cls, a, b, e, n):
        return cls("quad", tuple(sorted((str(a), str(b)))), tuple(sorted((e, cyclic(e + 1, n)))))

    @property
    def is_var(self):
        return self.kind == "var"

    @property
    def row(self):
        return self.rows[0]

    @property
    def col(self):
        return self.cols[0]

    @property
    def edge(self):
        if self.is_var:
            return None
        i, j = self.cols
        return i if j - i == 1 else j

    @property
    def label(self):
        if self.is_var:
            return "x[{},{}]".format(self.row, self.col)
        return "D[{}|{};{},{}]".format(self.rows[0], self.rows[1], self.cols[0], self.cols[1])

    def polynomial(self):
        if self.is_var:
            return var_poly(self.row, self.col)
        return det2(self.rows[0], self.rows[1], self.cols[0], self.cols[1])

    @classmethod
    def from_polynomial(cls, poly, n):
        variables = poly.variables()
        if poly.degree() == 1 and len(variables) == 1:
            return cls.var(variables[0].row, variables[0].col)
        rows = sorted({v.row for v in variables})
        cols = sorted({v.col for v in variables})
        if poly.degree() == 2 and len(rows) == 2 and len(cols) == 2:
            e = cols[0] if cols[1] - cols[0] == 1 else cols[1]
            if cyclic(e + 1, n) not in cols:
                raise InputError("Quadratic factor {} is not on one edge".format(poly.to_text()))
            return cls.quad(rows[0], rows[1], e, n)
        raise UnstructuredResidualError("Factor {} is neither an entry nor a 2x2 minor".format(poly.to_text()),
                                        payload={"factor": poly.to_text()})

    def to_dict(self):
        if self.is_var:
            return {"kind": "var", "row": self.row, "col": self.col}
        e = self.edge
        other = self.cols[1] if self.cols[0] == e else self.cols[0]
        return {"kind": "quad", "rows": list(self.rows), "cols": [e, other]}

    @classmethod
    def from_dict(cls, d, n):
        try:
            if d["kind"] == "var":
                return cls.var(d["row"], d["col"])
            return cls.quad(d["rows"][0], d["rows"][1], int(d["cols"][0]), n)
        except (KeyError, IndexError, TypeError) as e:
            raise InputError("Cannot read factor {}: {}".format(d, e))

    def __str__(self):
        return self.label


@dataclass
class RPolynomial:
    factors: tuple
    provenance: str

    def __post_init__(self):
        self.factors = tuple(sorted(set(self.factors)))

    def factor_set(self):
        return frozenset(self.factors)

    def __contains__(self, f):
        return f in self.factors

    def product(self):
        out = Polynomial.constant(1)
        for f in self.factors:
            out = out * f.polynomial()
        return out

    def to_dict(self):
        return {"factors": [f.to_dict() for f in self.factors], "provenance": self.provenance}


def r_poly_edge(W):
    """
    >>> sorted(str(f) for f in r_poly_edge(wld.WilsonLoopDiagram(6, [(2, 4)])).factors)
    ['x[2:4,2]', 'x[2:4,3]', 'x[2:4,4]', 'x[2:4,5]']
    """
    wld.require_admissible(W)
    factors = []
    for e in range(1, W.n + 1):
        order = wld.edge_order(W, e)
        if not order:
            continue
        factors.append(PoleFactor.var(order[0].label, cyclic(e + 1, W.n)))
        for q, r in zip(order, order[1:]):
            factors.append(PoleFactor.quad(q.label, r.label, e, W.n))
        factors.append(PoleFactor.var(order[-1].label, e))
    return RPolynomial(tuple(factors), "edge-formula")


def _as_system(V):
    if isinstance(V, wld.WilsonLoopDiagram):
        return V.set_system()
    if isinstance(V, SetSystem):
        return V
    raise InputError("Cannot read a set system from {}".format(type(V)))


def r_poly_necklace(V, reverse=False):
    """distinct structured factors of the (reverse) necklace minors"""
    V = _as_system(V)
    if V.k == 0:
        return RPolynomial((), "reverse-necklace-radical" if reverse else "necklace-radical")
    M = SymbolicMatrix(V)
    I = necklace(Matroid.from_system(V))
    factors = []
    for cols, minor in zip(I.reverse if reverse else I.elements, necklace_minors(M, I, reverse=reverse)):
        fac = structured_factorize(minor)
        if not fac.structured:
            raise UnstructuredResidualError("Necklace minor on {} has residual {}".format(sorted(cols),
                                                                                       fac.residual.to_text()),
                                            payload={"cols": sorted(cols), "minor": minor.to_text(),
                                                     "residual": fac.residual.to_text()})
        factors.extend(PoleFactor.from_polynomial(f, V.n) for f in fac.distinct())
    return RPolynomial(tuple(factors), "reverse-necklace-radical" if reverse else "necklace-radical")


def check_r_equalities(W, raise_on_mismatch=True):
    edge = r_poly_edge(W)
    neck = r_poly_necklace(W)
    rev = r_poly_necklace(W, reverse=True)
    equal = edge.factor_set() == neck.factor_set() == rev.factor_set()
    report = {"diagram": W.label, "equal": equal, "edge": edge.to_dict(), "necklace": neck.to_dict(),
              "reverse": rev.to_dict()}
    if not equal:
        logger.warning("R polynomials differ on {}".format(W.label))
        if raise_on_mismatch:
            raise RMismatchError("R polynomials differ on {}".format(W.label), payload=report)
    else:
        logger.debug("R polynomials agree on {}: {} factors".format(W.label, len(edge.factors)))
    return report


def require_in_r(W, f):
    R = r_poly_edge(W)
    if f not in R:
        raise FactorNotInRError("Factor {} is not in R of {}".format(f, W.label),
                                payload={"diagram": W.label, "factor": f.to_dict()})
    return R


def quad_far_edges(W, f):
    """
    (j, k) for a quadratic factor on edge e: j is the far edge of the row nearer to vertex e+1
    """
    e = f.edge
    p, q = (wld.Propagator.from_label(label) for label in f.rows)
    order = wld.edge_order(W, e)
    first, second = sorted((p, q), key=order.index)
    # edge order puts the far edge most distant from vertex e+1 first
    return second.other(e), first.other(e)


def factor_codim(W, f, rng=None):
    """
    codimension of the factor's vanishing locus in the cell; decided combinatorially, with an optional
    Jacobian-dimension cross-check when rng is given
    """
    require_in_r(W, f)
    V = W.set_system()
    if f.is_var:
        reduced = V.remove_entry(f.row, f.col)
        M = Matroid.from_system(reduced)
        positroid = M.full_rank == V.k and M.is_positroid()[0]
        if positroid and is_minimal(reduced, require_positroid=False).minimal:
            codim = CODIM_ONE
        else:
            codim = CODIM_HIGHER
        if rng is not None and positroid:
            estimate = jacobian_dimension(reduced, rng)
            expected = V.m - 1 - V.k
            if (estimate == expected) != (codim == CODIM_ONE):
                raise InconsistencyError("Codimension of {} on {} disagrees with its Jacobian dimension".format(
                    f, W.label), payload={"codim": codim, "dimension": estimate, "expected": expected})
        return codim
    j, k = quad_far_edges(W, f)
    r = wld.Propagator(j, k)
    codim = CODIM_HIGHER if r in W.props else CODIM_ONE
    if rng is not None:
        report = span_growth(limit_matrix(W, f), rng)
        if report.holds != (codim == CODIM_ONE):
            raise InconsistencyError("Codimension of {} on {} disagrees with span growth".format(f, W.label),
                                     payload={"codim": codim, "span": report.to_dict()})
    return codim


def limit_matrix(W, f, gauge=False):
    """M_VP on the factor's vanishing locus"""
    M = W.matrix(gauge=gauge) if isinstance(W, wld.WilsonLoopDiagram) else W
    return factor_limit(M, f)


def factor_limit(M, f):
    if f.is_var:
        return M.substitute({VarId(f.row, f.col): Polynomial()})
    a, b = f.rows
    z = Polynomial.variable(scale_variable(f))
    mapping = {VarId(b, c): z * var_poly(a, c) for c in f.cols}
    return M.substitute(mapping)


def scale_variable(f):
    a, b = f.rows
    return VarId("{}/{}".format(b, a), f.edge)


@dataclass
class SpanGrowthReport:
    holds: bool
    span_condition: bool
    dimension: int
    expected: int
    witness: dict = field(default_factory=dict)

    def to_dict(self):
        return {"holds": self.holds, "span_condition": self.span_condition, "dimension": self.dimension,
                "expected": self.expected, "witness": self.witness}


def span_growth(M, rng):
    """
    dim L(M') == d - k decides; growth of the row-support union under adding a row is reported alongside
    """
    d = len(M.variables())
    expected = d - M.k
    dimension = jacobian_dimension(M, rng)
    supports = M.row_supports()
    span_ok = True
    witness = {}
    for size in range(1, M.k):
        for idx in itertools.combinations(range(M.k), size):
            span = frozenset().union(*(supports[i] for i in idx))
            for r in range(M.k):
                if r in idx:
                    continue
                if supports[r] <= span:
                    span_ok = False
                    witness = {"rows": [M.labels[i] for i in idx], "added": M.labels[r]}
                    break
            if not span_ok:
                break
        if not span_ok:
            break
    return SpanGrowthReport(dimension == expected, span_ok, dimension, expected, witness)


def vanish_on_boundary_witness(W, f, rng):
    """random positive point of the factor's vanishing locus where some necklace minor of the cell vanishes"""
    require_in_r(W, f)
    I = necklace(Matroid.from_system(W.set_system()))
    M = limit_matrix(W, f)
    point = random_assignment(M.variables(), rng)
    vanishing = []
    for a, cols in enumerate(I.elements, start=1):
        if M.minor(None, sorted(cols)).evaluate(point) == 0:
            vanishing.append(a)
    if not vanishing:
        raise FindingError("No necklace minor vanishes on the locus of {} in {}".format(f, W.label),
                           payload={"diagram": W.label, "factor": f.to_dict(), "point": assignment_to_dict(point)})
    return {"diagram": W.label, "factor": f.to_dict(), "point": assignment_to_dict(point),
            "vanishing": vanishing}


@dataclass
class BoundaryNoPoleCertificate:
    flats: tuple
    props: tuple
    rows: SetSystem
    checks: dict = field(default_factory=dict)
    pivot: dict = field(default_factory=dict)
    implication: str = "inconclusive"

    @property
    def valid(self):
        return all(self.checks.values())

    def to_dict(self):
        return {"flats": [sorted(F) for F in self.flats],
                "props": [[p.label for p in P] for P in self.props],
                "rows": self.rows.to_dict(),
                "checks": self.checks,
                "pivot": self.pivot,
                "implication": self.implication,
                "valid": self.valid}


def _boundary_rows(V, A, B):
    """rows meeting B lose B; rows meeting A but not B become V_i | A | B"""
    rows = []
    for r in V.rows:
        if r & B:
            rows.append(r - B)
        elif r & A:
            rows.append(r | A | B)
        else:
            rows.append(r)
    return V.with_rows(rows)


def _factor_set(poly):
    return frozenset(structured_factorize(poly).distinct())


def _pivot(W, M, Vb, Mb, A, B):
    """v, I_v, I'_v, w, I_w and the factor implication Delta_{I_v} <= Delta_{I'_v} and Delta_{I_w}"""
    n = W.n
    union = A | B
    start = interval_start(union, range(1, n + 1))
    if start in A and start in B:
        return None
    if start not in A:
        A, B = B, A
    order = _shifted(union, start, n)
    v = next((x for x in order if M.rank({x}) > 0), None)
    if v is None:
        return None
    I, Ib = necklace(M), necklace(Mb)
    I_v, Ib_v = I[v], Ib[v]
    w = next((x for x in _shifted(I_v, v, n) if x in B - A), None)
    if w is None:
        return None
    I_w = I[w]
    matrix = W.matrix()
    limit = SymbolicMatrix(Vb)
    d_v, d_vb, d_w = (matrix.minor(None, sorted(cols)) for cols in (I_v, Ib_v, I_w))
    certified = _factor_set(d_v) <= (_factor_set(d_vb) | _factor_set(d_w))
    vanishes = limit.minor(None, sorted(I_v)).is_zero
    survive = not limit.minor(None, sorted(Ib_v)).is_zero and not limit.minor(None, sorted(I_w)).is_zero
    pivot = {"v": v, "I_v": sorted(I_v), "I_v_boundary": sorted(Ib_v), "w": w, "I_w": sorted(I_w),
             "vanishes_on_boundary": vanishes, "survivors_nonzero": survive}
    return pivot, ("certified" if certified and vanishes and survive else "inconclusive")


def boundary_without_pole(W):
    """
    boundaries of the cell obtained from two propagator flats, on which no factor of R vanishes identically
    """
    wld.require_admissible(W)
    if W.k < 2:
        return []
    V = W.set_system()
    M = Matroid.from_system(V)
    cyclic_flats = set(M.cyclic_flats())
    ground = range(1, W.n + 1)
    subsets = [P for size in range(1, W.k) for P in itertools.combinations(W.props, size)]
    seen = set()
    out = []
    for P, Q in itertools.combinations(subsets, 2):
        if set(P) <= set(Q) or set(Q) <= set(P):
            continue
        A, B = wld.propagator_flat(P, W), wld.propagator_flat(Q, W)
        if A not in cyclic_flats or B not in cyclic_flats:
            continue
        if not (0 < M.rank(A) < W.k and 0 < M.rank(B) < W.k):
            continue
        if A <= B or B <= A:
            continue
        if not all(is_cyclic_interval(S, ground) for S in (A, B, A | B)) or len(A | B) == W.n:
            continue
        for (Vf, Wf), props in (((A, B), (P, Q)), ((B, A), (Q, P))):
            Vb = _boundary_rows(V, Vf, Wf)
            key = Vb.support_key()
            if key in seen:
                continue
            cert = _certify(W, V, M, Vb, Vf, Wf, props)
            if cert is not None and cert.valid:
                seen.add(key)
                out.append(cert)
    logger.info("Found {} boundaries without poles for {}".format(len(out), W.label))
    return out


def _certify(W, V, M, Vb, Vf, Wf, props):
    Mb = Matroid.from_system(Vb)
    checks = {"entry_count": Vb.m == V.m, "rank_preserved": Mb.full_rank == V.k}
    if not checks["rank_preserved"]:
        return BoundaryNoPoleCertificate((Vf, Wf), props, Vb, checks)
    boundary, evidence = is_boundary_of(Vb, V)
    checks["bases_contained"] = boundary
    checks["necklace_differs"] = evidence["necklace_index"] is not None
    checks["circuits_preserved"] = all(Mb.rank(C) < len(C) for C in M.circuits() if C <= Vf or C <= Wf)
    cert = BoundaryNoPoleCertificate((Vf, Wf), props, Vb, checks)
    if not cert.valid:
        return cert
    found = _pivot(W, M, Vb, Mb, Vf, Wf)
    if found is None:
        checks["pivot_found"] = False
        return cert
    cert.pivot, cert.implication = found
    checks["pivot_found"] = True
    return cert


def classify_factors(W, rng=None):
    """every factor of R with its codimension and case tag"""
    from .cancel import classify

    out = []
    for f in r_poly_edge(W).factors:
        codim = factor_codim(W, f, rng=rng)
        try:
            case = classify(W, f)
        except FindingError as e:
            logger.warning("Cannot classify {} on {}: {}".format(f, W.label, e))
            case = None
        out.append({"factor": f.to_dict(), "label": f.label, "codim": codim, "case": case})
    return out
