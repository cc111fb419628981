"""
Cancellation of codimension one spurious poles across admissible diagrams.

Every codimension one factor of every diagram in W(k, n) is placed in a group of two or three
(diagram, factor) members whose vanishing limits land on the same boundary cell. A group is verified with
exact arithmetic: equal limit matroids, vanishing weight sum, matching row spaces (a change of rows for pairs,
the printed GL(2) matrices and change of variables for triples), the localisation sign identity for pairs and
the Jacobian of the 2x2 change of variables for groups with a quadratic member.
"""
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from . import wld
from .exactalg import (Polynomial, VarId, bareiss_det, det2, nullspace, pair_reparameterization, random_assignment,
                       rank)
from .poles import (PoleFactor, CODIM_ONE, factor_codim, limit_matrix, quad_far_edges, r_poly_edge, require_in_r,
                    scale_variable)
from .positroid import CellDescriptor, jacobian_dimension, necklace_from_bases
from .utils import (InputError, FindingError, InconsistencyError, PartnerError, cyclic, get_seed, random_fraction,
                    spawn_rng, flatten_dict, clean_none)

logger = logging.getLogger("wldpoles")

CASE1, CASE1A, CASE2, CASE2A, CASE3, CASE3A, CASE3B = ("Case1", "Case1a", "Case2", "Case2a", "Case3", "Case3a",
                                                       "Case3b")
HIGHER_CODIM_CASES = (CASE1A, CASE3A)

CHECKS = ("members_admissible", "members_in_r", "codim_one", "boundary_equality", "weight_sum_zero",
          "row_space_match", "sign_identity", "jacobian")

E = sympy.Symbol("e")


@dataclass(frozen=True)
class TwistorData:
    """rows Z_1..Z_n of length k+4 and the gauge row Z_0"""
    Z: tuple
    Z0: tuple

    @property
    def n(self):
        return len(self.Z)

    @property
    def width(self):
        return len(self.Z0)

    def row(self, i):
        return self.Z[i - 1]

    def is_positive(self):
        if self.n < self.width:
            return False
        for rows in itertools.combinations(range(self.n), self.width):
            if bareiss_det([self.Z[i] for i in rows]) <= 0:
                return False
        return True

    def validate(self, k):
        if self.width != k + 4 or any(len(z) != k + 4 for z in self.Z):
            raise InputError("Twistor rows need length {}".format(k + 4))
        if not self.is_positive():
            raise InputError("Twistor data has a non-positive ordered maximal minor")
        return self


def random_twistors(k, n, rng):
    """points (1, t, t^2, ...) on the moment curve at increasing positive rational t"""
    if n < k + 4:
        raise InputError("Need n >= k + 4 for positive twistor data, got k={} n={}".format(k, n))
    t = Fraction(0)
    Z = []
    for _ in range(n):
        t += random_fraction(rng)
        Z.append(tuple(t ** d for d in range(k + 4)))
    Z0 = tuple(random_fraction(rng, positive=False) for _ in range(k + 4))
    return TwistorData(tuple(Z), Z0).validate(k)


def _support_order(p, n):
    return [p.e1, cyclic(p.e1 + 1, n), p.e2, cyclic(p.e2 + 1, n)]


def localize(W, Z):
    """
    x[p,0] = <Z_i Z_i+1 Z_j Z_j+1> on the first four coordinates; x[p,m] the same bracket with Z_m replaced
    by Z_0
    """
    if Z.n != W.n:
        raise InputError("Twistor data has {} rows, diagram has n={}".format(Z.n, W.n))
    out = {}
    for p in W.props:
        order = _support_order(p, W.n)
        rows = [Z.row(m)[:4] for m in order]
        out[VarId(p.label, 0)] = bareiss_det(rows)
        for slot, m in enumerate(order):
            replaced = list(rows)
            replaced[slot] = Z.Z0[:4]
            out[VarId(p.label, m)] = bareiss_det(replaced)
    zeros = [v.key for v, x in out.items() if x == 0]
    if zeros:
        raise InputError("Degenerate twistor data for {}: zero brackets at {}".format(W.label, zeros),
                         payload={"zeros": zeros})
    return out


def var_partner(W, p, v):
    """the unique other propagator whose support contains V_p - v, with the vertex it adds"""
    rest = p.support(W.n) - {v}
    candidates = [q for q in wld.valid_propagators(W.n) if q != p and rest <= q.support(W.n)]
    if len(candidates) != 1:
        raise PartnerError("No unique partner for x[{},{}] in {}".format(p.label, v, W.label),
                           payload={"candidates": [q.label for q in candidates]})
    q = candidates[0]
    (new,) = q.support(W.n) - rest
    return q, new


def consecutive_start(p, n):
    """first vertex a of a support {a, a+1, a+2, a+3}"""
    return p.e1 if p.e2 - p.e1 == 2 else p.e2


def classify(W, f):
    require_in_r(W, f)
    if f.is_var:
        p = wld.Propagator.from_label(f.row)
        q, _ = var_partner(W, p, f.col)
        if q in W.props:
            return CASE1A
        if not p.is_consecutive(W.n):
            return CASE1
        a = consecutive_start(p, W.n)
        if f.col in (a, cyclic(a + 3, W.n)):
            return CASE2 if wld.validate(W.replace(p, q)).admissible else CASE2A
        return CASE2
    j, k = quad_far_edges(W, f)
    if cyclic(j + 1, W.n) == k:
        return CASE3B
    if wld.Propagator(j, k) in W.props:
        return CASE3A
    return CASE3


@dataclass(frozen=True)
class GroupMember:
    diagram: wld.WilsonLoopDiagram
    factor: PoleFactor
    weight: str
    config: str = None

    @property
    def key(self):
        return self.diagram.label, self.factor.label

    def to_dict(self):
        return {"diagram": self.diagram.to_dict(), "label": self.diagram.label, "factor": self.factor.to_dict(),
                "factor_label": self.factor.label, "weight": self.weight, "config": self.config}


@dataclass
class CancellationGroup:
    kind: str
    members: tuple
    checks: dict = field(default_factory=dict)
    cases: list = field(default_factory=list)
    boundary: CellDescriptor = None
    findings: list = field(default_factory=list)

    @property
    def key(self):
        return frozenset(m.key for m in self.members)

    @property
    def sort_key(self):
        return tuple(sorted(self.key))

    @property
    def verified(self):
        return bool(self.checks) and all(v for v in self.checks.values() if v is not None)

    def __contains__(self, key):
        return key in self.key

    def to_dict(self):
        return {"kind": self.kind,
                "members": [m.to_dict() for m in self.members],
                "cases": self.cases,
                "boundary": self.boundary.to_dict() if self.boundary is not None else None,
                "checks": self.checks,
                "verified": self.verified,
                "findings": self.findings}


def _pair(W, p, v):
    q, new = var_partner(W, p, v)
    Wq = W.replace(p, q)
    members = sorted([(W, PoleFactor.var(p.label, v)), (Wq, PoleFactor.var(q.label, new))],
                     key=lambda m: (m[0].label, m[1].label))
    return CancellationGroup("pair", tuple(GroupMember(D, f, w) for (D, f), w in zip(members, ("+1", "-1"))))


WIDE_WEIGHTS = {"Config1": "1", "Config2": "e/(1-e)", "Config3": "-1/(1-e)"}
NARROW_WEIGHTS = {"Config4": "1", "Config5": "e/(1-e)", "Config6": "-1/(1-e)"}


def _wide_triple(W, f):
    """
    base B = P - {p, q} with p = (e, j), q = (e, k); Config1 keeps the quadratic on e, Config2 holds
    {p, (j, k)} with the quadratic on j and Config3 holds {q, (j, k)} with the quadratic on k
    """
    e = f.edge
    j, k = quad_far_edges(W, f)
    p, q, r = wld.Propagator(e, j), wld.Propagator(e, k), wld.Propagator(j, k)
    base = [s for s in W.props if s not in (p, q)]
    members = []
    for config, pair, edge in (("Config1", (p, q), e), ("Config2", (p, r), j), ("Config3", (q, r), k)):
        D = wld.WilsonLoopDiagram(W.n, base + list(pair))
        members.append(GroupMember(D, PoleFactor.quad(pair[0].label, pair[1].label, edge, W.n),
                                   WIDE_WEIGHTS[config], config))
    return CancellationGroup(CASE3, tuple(members))


def _narrow_triple(W, f):
    """p = (e, j), q = (e, j+1); the quadratic, and the outer entries of (j, j+2) and (j-1, j+1)"""
    n = W.n
    e = f.edge
    j, _ = quad_far_edges(W, f)
    p, q = wld.Propagator(e, j), wld.Propagator(e, cyclic(j + 1, n))
    r = wld.Propagator(j, cyclic(j + 2, n))
    s = wld.Propagator(cyclic(j - 1, n), cyclic(j + 1, n))
    members = (GroupMember(W, f, NARROW_WEIGHTS["Config4"], "Config4"),
               GroupMember(W.replace(q, r), PoleFactor.var(r.label, cyclic(j + 3, n)), NARROW_WEIGHTS["Config5"],
                           "Config5"),
               GroupMember(W.replace(p, s), PoleFactor.var(s.label, cyclic(j - 1, n)), NARROW_WEIGHTS["Config6"],
                           "Config6"))
    return CancellationGroup(CASE3B, members)


def narrow_base(W, f):
    """the diagram and quadratic factor whose narrow triple holds a Case2a entry"""
    n = W.n
    s = wld.Propagator.from_label(f.row)
    a = consecutive_start(s, n)
    if f.col == cyclic(a + 3, n):
        order = wld.edge_order(W, a)
        if len(order) < 2:
            raise PartnerError("No neighbour of {} on edge {} in {}".format(s.label, a, W.label))
        m = order[-2].other(a)
        other = wld.Propagator(m, a)
    else:
        order = wld.edge_order(W, cyclic(a + 2, n))
        if len(order) < 2:
            raise PartnerError("No neighbour of {} on edge {} in {}".format(s.label, cyclic(a + 2, n), W.label))
        m = order[1].other(cyclic(a + 2, n))
        other = wld.Propagator(m, cyclic(a + 2, n))
    base = W.replace(s, wld.Propagator(m, cyclic(a + 1, n)))
    return base, PoleFactor.quad(wld.Propagator(m, cyclic(a + 1, n)).label, other.label, m, n)


def partners(W, f):
    case = classify(W, f)
    if case in HIGHER_CODIM_CASES:
        raise InputError("{} factor {} on {} has no cancellation partner".format(case, f, W.label))
    if case in (CASE1, CASE2):
        group = _pair(W, wld.Propagator.from_label(f.row), f.col)
    elif case == CASE3:
        group = _wide_triple(W, f)
    elif case == CASE3B:
        group = _narrow_triple(W, f)
    else:
        base, quad = narrow_base(W, f)
        if not wld.validate(base).admissible or quad not in r_poly_edge(base):
            raise PartnerError("Base of {} on {} is not a narrow configuration".format(f, W.label),
                               payload={"base": base.label, "factor": quad.to_dict()})
        group = _narrow_triple(base, quad)
    for m in group.members:
        verdict = wld.validate(m.diagram)
        if not verdict.admissible:
            raise PartnerError("Partner {} of {} is not admissible".format(m.diagram.label, W.label),
                               payload={"diagram": m.diagram.label, "verdict": verdict.to_dict()})
    if (W.label, f.label) not in group:
        raise PartnerError("Group built from {} on {} does not contain it".format(f, W.label),
                           payload={"members": [list(m.key) for m in group.members]})
    return group


def weight_sum_zero(weights, rng, samples=3):
    """
    >>> weight_sum_zero(["1", "e/(1-e)", "-1/(1-e)"], spawn_rng(0))
    True
    """
    total = sympy.simplify(sum(sympy.sympify(w, locals={"e": E}) for w in weights))
    if total != 0:
        return False
    for _ in range(samples):
        x = random_fraction(rng, positive=False)
        if x == 1:
            continue
        value = sum(sympy.sympify(w, locals={"e": E}).subs(E, sympy.Rational(x.numerator, x.denominator))
                    for w in weights)
        if value != 0:
            return False
    return True


def _limit_bases(M):
    return frozenset(M.nonzero_minors())


def _row_space_match(source, target, common, point):
    """
    pairs: the swapped target row is, up to scale, the unique combination of the source rows outside the common
    ones vanishing off its support; the combinations form an invertible matrix
    """
    src_rows = [i for i, label in enumerate(source.matrix.labels) if label not in common]
    values = source.matrix.evaluate(point)
    columns = source.matrix.columns
    tgt_supports = target.matrix.row_supports()
    combos = []
    for t, label in enumerate(target.matrix.labels):
        if label in common:
            continue
        support = tgt_supports[t]
        off = [ci for ci, c in enumerate(columns) if c not in support]
        equations = [[values[i][ci] for i in src_rows] for ci in off]
        basis = nullspace(equations, width=len(src_rows))
        if len(basis) != 1:
            return False, {"row": label, "nullity": len(basis)}
        c = basis[0]
        vec = [sum(ci * values[i][col] for ci, i in zip(c, src_rows)) for col in range(len(columns))]
        if any(vec[ci] == 0 for ci, col in enumerate(columns) if col in support):
            return False, {"row": label, "reason": "zero on support"}
        combos.append(c)
    if len(combos) != len(src_rows) or bareiss_det(combos) == 0:
        return False, {"reason": "singular change of rows"}
    return True, {}


# target configuration: printed GL(2) matrix, and which output row lands on source row 1 and row 2
TARGET_TRANSFORMS = {"Config2": ("swap_top", (0, 1)), "Config3": ("swap_bottom", (0, 1)),
                     "Config5": ("keep_top", (0, 1)), "Config6": ("swap_bottom", (1, 0))}


def printed_transform(kind, t):
    """
    2x2 matrix fixing the gauge column (1, 1); t is the target's scale on its shared edge
    >>> [[str(x) for x in row] for row in printed_transform("swap_top", Fraction(3))]
    [['3/2', '-1/2'], ['1', '0']]
    """
    one, zero = Fraction(1), Fraction(0)
    mixed = [-t / (1 - t), 1 / (1 - t)]
    if kind == "swap_top":
        return [mixed, [one, zero]]
    if kind == "swap_bottom":
        return [[zero, one], mixed]
    if kind == "keep_top":
        return [[one, zero], mixed]
    raise InputError("Unknown transform {}".format(kind))


def source_scale(config, t):
    """
    the source's ratio e = row2/row1 on its quadratic edge, as a function of the target's scale t
    >>> source_scale("Config2", Fraction(1, 3))
    Fraction(-2, 1)
    """
    return {"Config2": (t - 1) / t, "Config3": 1 / (1 - t), "Config5": t / (t - 1), "Config6": 1 - t}[config]


def target_scale(config, e):
    """
    >>> target_scale("Config2", source_scale("Config2", Fraction(5, 7)))
    Fraction(5, 7)
    """
    return {"Config2": 1 / (1 - e), "Config3": (e - 1) / e, "Config5": e / (e - 1), "Config6": 1 - e}[config]


@dataclass(frozen=True)
class TripleLayout:
    """source rows (row1, row2) with row2 = e * row1 on the quadratic edge; per target its printed rows"""
    source_rows: tuple
    edge: int
    # config -> (row labels, shared edge, column of the free offset or None)
    targets: dict


def triple_layout(group):
    source = group.members[0]
    W, f = source.diagram, source.factor
    n = W.n
    e = f.edge
    j, k = quad_far_edges(W, f)
    P = wld.Propagator
    if group.kind == CASE3:
        return TripleLayout((P(e, k).label, P(e, j).label), e,
                            {"Config2": ((P(e, j).label, P(j, k).label), j, None),
                             "Config3": ((P(j, k).label, P(e, k).label), k, None)})
    j1 = cyclic(j + 1, n)
    return TripleLayout((P(e, j).label, P(e, j1).label), e,
                        {"Config5": ((P(e, j).label, P(j, cyclic(j + 2, n)).label), j, j1),
                         "Config6": ((P(cyclic(j - 1, n), j1).label, P(e, j1).label), j1, j1)})


def _sample_row(support, rng):
    return {c: Fraction(1) if c == 0 else random_fraction(rng) for c in support}


def _template_rows(supports, rows, edge, offset, t, n, rng):
    """the target's two rows on its limit with row2 = t * row1 on the shared edge, plus an offset if free"""
    first, second = (_sample_row(supports[label], rng) for label in rows)
    for c in (edge, cyclic(edge + 1, n)):
        if c not in first or c not in second:
            return None
        second[c] = t * first[c] + (random_fraction(rng) if c == offset else 0)
    return first, second


def _apply_transform(G, rows, columns):
    vecs = [[r.get(c, Fraction(0)) for c in columns] for r in rows]
    return [[G[i][0] * a + G[i][1] * b for a, b in zip(*vecs)] for i in range(2)]


def _source_point(matrix, rows, f):
    """the printed change of variables: source entries read off the transformed rows"""
    point = {}
    for label, row in rows.items():
        for c, x in zip(matrix.columns, row):
            point[VarId(label, c)] = x
    a, b = f.rows
    i = matrix.columns.index(f.edge)
    if rows[a][i] == 0:
        return None
    point[scale_variable(f)] = rows[b][i] / rows[a][i]
    return {v: point.get(v, Fraction(0)) for v in matrix.variables()}


def printed_row_space(group, trials, rng, findings):
    """
    each target limit, sampled with its own scale, is carried onto the source limit by its printed GL(2)
    matrix; the transformed rows must fit the source matrix under the read-off change of variables (exact
    rank of the stacked evaluations equals k), the read-off e must follow the printed relation and the weights
    evaluated at that e must sum to zero
    """
    def fail(reason, **detail):
        findings.append(dict(detail, check="row_space_match", reason=reason))
        return False

    layout = triple_layout(group)
    source = group.members[0]
    n = source.diagram.n
    src = limit_matrix(source.diagram, source.factor, gauge=True)
    src_supports = dict(zip(src.labels, src.row_supports()))
    common = [label for label in src.labels if label not in layout.source_rows]
    members = {m.config: m for m in group.members[1:]}
    if set(members) != set(layout.targets):
        return fail("configurations", configs=sorted(members))
    supports = {}
    for config, member in members.items():
        tgt = limit_matrix(member.diagram, member.factor, gauge=True)
        supports[config] = dict(zip(tgt.labels, tgt.row_supports()))
        if not set(layout.targets[config][0]) <= set(supports[config]):
            return fail("printed rows missing", target=member.diagram.label, rows=list(layout.targets[config][0]))
    edge_index = src.columns.index(layout.edge)
    for _ in range(trials):
        fixed = {label: _sample_row(src_supports[label], rng) for label in common}
        fixed_rows = {label: [row.get(c, Fraction(0)) for c in src.columns] for label, row in fixed.items()}
        e = None
        for config in sorted(layout.targets):
            target = members[config].diagram.label
            rows, shared, offset = layout.targets[config]
            if e is None:
                t = random_fraction(rng)
                while t == 1:
                    t = random_fraction(rng)
            else:
                t = target_scale(config, e)
            pair = _template_rows(supports[config], rows, shared, offset, t, n, rng)
            if pair is None:
                return fail("shared edge outside the printed rows", target=target)
            kind, order = TARGET_TRANSFORMS[config]
            out = _apply_transform(printed_transform(kind, t), pair, src.columns)
            moved = {layout.source_rows[0]: out[order[0]], layout.source_rows[1]: out[order[1]]}
            row1, row2 = (moved[label] for label in layout.source_rows)
            read = row2[edge_index] / row1[edge_index] if row1[edge_index] != 0 else None
            if read is None or read != source_scale(config, t) or (e is not None and read != e):
                return fail("change of variables", target=target, e=str(read), t=str(t))
            e = read
            point = _source_point(src, {**moved, **fixed_rows}, source.factor)
            if point is None:
                return fail("source scale undefined", target=target)
            stacked = [moved[label] for label in layout.source_rows] + list(fixed_rows.values())
            if rank(stacked) != src.k or rank(stacked + src.evaluate(point)) != src.k:
                return fail("row spaces differ", target=target, e=str(e))
        at = sympy.Rational(e.numerator, e.denominator)
        total = sum(sympy.sympify(m.weight, locals={"e": E}).subs(E, at) for m in group.members)
        if total != 0:
            return fail("weights at e", e=str(e), sum=str(total))
    return True


@dataclass
class _Limit:
    member: GroupMember
    matrix: object

    @property
    def factor(self):
        return self.member.factor


def verify_group(group, trials, rng):
    checks = {name: None for name in CHECKS}
    findings = []
    members = group.members
    checks["members_admissible"] = all(wld.validate(m.diagram).admissible for m in members)
    checks["members_in_r"] = all(m.factor in r_poly_edge(m.diagram) for m in members)
    if not (checks["members_admissible"] and checks["members_in_r"]):
        group.checks = checks
        return group
    checks["codim_one"] = all(factor_codim(m.diagram, m.factor) == CODIM_ONE for m in members)
    group.cases = [classify(m.diagram, m.factor) for m in members]

    limits = [_Limit(m, limit_matrix(m.diagram, m.factor)) for m in members]
    bases = [_limit_bases(L.matrix) for L in limits]
    checks["boundary_equality"] = all(B == bases[0] for B in bases)
    if not checks["boundary_equality"]:
        findings.append({"check": "boundary_equality", "bases": [sorted(sorted(b) for b in B) for B in bases]})
    first = limits[0]
    n = first.member.diagram.n
    if bases[0]:
        neck = necklace_from_bases(bases[0], n)
        group.boundary = CellDescriptor(first.matrix.k, n, [sorted(s) for s in first.matrix.row_supports()],
                                        neck, jacobian_dimension(first.matrix, rng))

    checks["weight_sum_zero"] = weight_sum_zero([m.weight for m in members], rng)

    if group.kind == "pair":
        common = set.intersection(*(set(p.label for p in m.diagram.props) for m in members))
        match = True
        for _ in range(trials):
            point = random_assignment(first.matrix.variables(), rng)
            ok, witness = _row_space_match(first, limits[1], common, point)
            if not ok:
                match = False
                findings.append(dict(witness, check="row_space_match", target=limits[1].member.diagram.label))
                break
        checks["row_space_match"] = match
        checks["sign_identity"] = _sign_identity(members, trials, rng, findings)
    else:
        checks["row_space_match"] = printed_row_space(group, trials, rng, findings)
    quads = [m for m in members if not m.factor.is_var]
    if quads:
        checks["jacobian"] = all(_jacobian_ok(m.factor, n) for m in quads)

    group.checks = checks
    group.findings = findings
    logger.debug("Group {} verified={}".format(group.sort_key, group.verified))
    return group


def _sign_identity(members, trials, rng, findings):
    (A, B) = members
    k, n = A.diagram.k, A.diagram.n
    for _ in range(trials):
        Z = random_twistors(k, n, rng)
        xa = localize(A.diagram, Z)[VarId(A.factor.row, A.factor.col)]
        xb = localize(B.diagram, Z)[VarId(B.factor.row, B.factor.col)]
        if xa != -xb:
            findings.append({"check": "sign_identity", "values": [str(xa), str(xb)]})
            return False
    return True


def _jacobian_ok(f, n):
    a, b = f.rows
    e = f.edge
    r = pair_reparameterization(a, b, e, cyclic(e + 1, n))
    X, Wv = Polynomial.variable(r.x), Polynomial.variable(r.w)
    return r.jacobian() == X and r.apply(det2(a, b, e, cyclic(e + 1, n))) == X * Wv


def _verify_job(args):
    group, trials, seed, index = args
    return verify_group(group, trials, spawn_rng(seed, index))


def amplitude_report(k, n, seed=None, trials=10, jobs=1):
    seed = get_seed(seed)
    groups = {}
    excluded = []
    findings = []
    entries = []
    for W in wld.enumerate(k, n):
        for f in r_poly_edge(W).factors:
            codim = factor_codim(W, f)
            try:
                case = classify(W, f)
            except FindingError as e:
                findings.append({"diagram": W.label, "factor": f.to_dict(), "error": str(e), "payload": e.payload})
                continue
            if codim != CODIM_ONE:
                tag = {CASE1A: "1a", CASE3A: "3a"}.get(case, "codim2")
                excluded.append({"diagram": W.to_dict(), "label": W.label, "factor": f.to_dict(), "case": tag})
                continue
            if case in HIGHER_CODIM_CASES:
                raise InconsistencyError("{} factor {} on {} has codimension one".format(case, f, W.label),
                                         payload={"diagram": W.label, "factor": f.to_dict()})
            entries.append((W.label, f.label))
            try:
                group = partners(W, f)
            except FindingError as e:
                findings.append({"diagram": W.label, "factor": f.to_dict(), "error": str(e), "payload": e.payload})
                continue
            groups.setdefault(group.key, group)
    ordered = [groups[key] for key in sorted(groups, key=lambda key: tuple(sorted(key)))]
    logger.info("Verifying {} groups for k={} n={}".format(len(ordered), k, n))
    job_args = [(g, trials, seed, i) for i, g in enumerate(ordered)]
    if jobs > 1 and len(job_args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            verified = list(executor.map(_verify_job, job_args))
    else:
        verified = [_verify_job(a) for a in job_args]

    for entry in entries:
        holders = [i for i, g in enumerate(verified) if entry in g]
        if len(holders) != 1:
            findings.append({"entry": list(entry), "groups": holders,
                             "error": "unassigned" if not holders else "assigned more than once"})
    unverified = [i for i, g in enumerate(verified) if not g.verified]
    for i in unverified:
        logger.warning("Group {} failed verification: {}".format(i, verified[i].findings))
    status = "complete" if not findings and not unverified else "incomplete"
    logger.info("Cancellation report k={} n={}: {} groups, {} excluded, status {}".format(
        k, n, len(verified), len(excluded), status))
    return {"schema": "1", "k": k, "n": n, "seed": seed, "trials": trials,
            "groups": [g.to_dict() for g in verified],
            "excluded": excluded,
            "findings": findings,
            "totals": {"groups": len(verified), "excluded": len(excluded), "entries": len(entries),
                       "unverified": len(unverified)},
            "status": status}


def report_records(report):
    """one flat record per group for csv output"""
    records = []
    for i, g in enumerate(report["groups"]):
        record = {"group": i, "kind": g["kind"], "size": len(g["members"]),
                  "members": "; ".join("{} {}".format(m["label"], m["factor_label"]) for m in g["members"]),
                  "verified": g["verified"],
                  "checks": {name: g["checks"].get(name) for name in CHECKS}}
        records.append(clean_none(flatten_dict(record)))
    return records
