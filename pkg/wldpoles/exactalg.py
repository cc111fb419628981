"""
Exact algebra over the rationals: sparse polynomials in named matrix-entry variables, variable valued
matrices and their minors, structured factorisation into entries and 2x2 determinants, Jacobians.
"""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .utils import InputError, MissingVariableError, random_fraction, format_fraction, parse_fraction

logger = logging.getLogger("wldpoles")


@dataclass(frozen=True, order=True)
class VarId:
    row: str
    col: int

    def __str__(self):
        return "x[{},{}]".format(self.row, self.col)

    @property
    def key(self):
        return "{},{}".format(self.row, self.col)

    @classmethod
    def from_key(cls, key):
        try:
            row, col = key.rsplit(",", 1)
            return cls(row, int(col))
        except ValueError:
            raise InputError("Cannot parse variable key {}".format(key))


def _mono_mul(m1, m2):
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_divides(m1, m2):
    """m1 | m2"""
    exps = dict(m2)
    return all(exps.get(v, 0) >= e for v, e in m1)


def _mono_div(m2, m1):
    exps = dict(m2)
    for v, e in m1:
        exps[v] -= e
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def _lex_key(mono):
    # smallest key is the lex-largest monomial
    return tuple((0, v, -e) for v, e in mono) + ((1,),)


class Polynomial:
    """
    sparse polynomial: monomial (sorted tuple of (VarId, exponent)) -> Fraction, no zero coefficients

    >>> x, y = Polynomial.variable(VarId("1", 1)), Polynomial.variable(VarId("2", 2))
    >>> (x + y - x).to_text()
    '1 * x[2,2]'
    >>> (x * y - y * x).is_zero
    True
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def constant(cls, c):
        return cls({(): c})

    @classmethod
    def variable(cls, var):
        return cls({((var, 1),): 1})

    @staticmethod
    def coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        if isinstance(other, VarId):
            return Polynomial.variable(other)
        raise TypeError("Cannot use {} as a polynomial".format(type(other)))

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_constant(self):
        return all(mono == () for mono in self.terms)

    @property
    def constant_value(self):
        if not self.is_constant:
            raise InputError("Polynomial {} is not constant".format(self.to_text()))
        return self.terms.get((), Fraction(0))

    def variables(self):
        return sorted({v for mono in self.terms for v, _ in mono})

    def degree(self):
        return max((sum(e for _, e in mono) for mono in self.terms), default=0)

    def min_exponent(self, var):
        return min(dict(mono).get(var, 0) for mono in self.terms)

    def __add__(self, other):
        other = Polynomial.coerce(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({mono: -c for mono, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other):
        return Polynomial.coerce(other) - self

    def __mul__(self, other):
        other = Polynomial.coerce(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        out = Polynomial.constant(1)
        for _ in range(exponent):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _lex_key(t[0]))

    def leading_term(self):
        return self.sorted_terms()[0]

    def divide(self, divisor):
        """
        lex-order division by a single polynomial; returns (quotient, remainder)
        >>> x, y = Polynomial.variable(VarId("1", 1)), Polynomial.variable(VarId("1", 2))
        >>> q, r = (x * x * y - y).divide(x * y - y)
        >>> q.to_text(), r.to_text()
        ('1 * x[1,1] + 1', '0')
        """
        divisor = Polynomial.coerce(divisor)
        if divisor.is_zero:
            raise InputError("Division by the zero polynomial")
        lead_mono, lead_c = divisor.leading_term()
        quotient = Polynomial()
        remainder = Polynomial()
        p = self
        while not p.is_zero:
            mono, c = p.leading_term()
            if _mono_divides(lead_mono, mono):
                t = Polynomial({_mono_div(mono, lead_mono): c / lead_c})
                quotient = quotient + t
                p = p - t * divisor
            else:
                lt = Polynomial({mono: c})
                remainder = remainder + lt
                p = p - lt
        return quotient, remainder

    def exact_divide(self, divisor):
        q, r = self.divide(divisor)
        return q if r.is_zero else None

    def divide_monomial(self, var, exponent):
        out = {}
        for mono, c in self.terms.items():
            exps = dict(mono)
            exps[var] = exps.get(var, 0) - exponent
            assert exps[var] >= 0
            out[tuple(sorted((v, e) for v, e in exps.items() if e))] = c
        return Polynomial(out)

    def derivative(self, var):
        out = {}
        for mono, c in self.terms.items():
            exps = dict(mono)
            e = exps.get(var, 0)
            if e == 0:
                continue
            exps[var] = e - 1
            new = tuple(sorted((v, x) for v, x in exps.items() if x))
            out[new] = out.get(new, 0) + c * e
        return Polynomial(out)

    def substitute(self, mapping):
        """replace variables by polynomials (or numbers); unmapped variables stay"""
        out = Polynomial()
        for mono, c in self.terms.items():
            term = Polynomial.constant(c)
            for v, e in mono:
                if v in mapping:
                    term = term * (Polynomial.coerce(mapping[v]) ** e)
                else:
                    term = term * Polynomial({((v, e),): 1})
            out = out + term
        return out

    def evaluate(self, assignment):
        total = Fraction(0)
        for mono, c in self.terms.items():
            value = c
            for v, e in mono:
                if v not in assignment:
                    raise MissingVariableError("No value for {} in assignment".format(v), payload={"variable": v.key})
                value *= Fraction(assignment[v]) ** e
            total += value
        return total

    def to_text(self):
        """
        >>> p = Polynomial.variable(VarId("q", 2)) * Polynomial.variable(VarId("p", 1)) ** 2 * Fraction(-1, 2)
        >>> p.to_text()
        '-1/2 * x[p,1]^2 * x[q,2]'
        """
        if self.is_zero:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = [format_fraction(c)]
            for v, e in mono:
                factors.append(str(v) if e == 1 else "{}^{}".format(v, e))
            parts.append(" * ".join(factors))
        return " + ".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return "Polynomial({})".format(self.to_text())

    def to_sympy(self):
        expr = sympy.Integer(0)
        for mono, c in self.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for v, e in mono:
                term = term * sympy_symbol(v) ** e
            expr = expr + term
        return expr


def sympy_symbol(var):
    return sympy.Symbol(str(var))


def var_poly(row, col):
    return Polynomial.variable(VarId(str(row), int(col)))


def det2(a_row, b_row, i, j):
    """x_{a,i} x_{b,j} - x_{a,j} x_{b,i}"""
    return var_poly(a_row, i) * var_poly(b_row, j) - var_poly(a_row, j) * var_poly(b_row, i)


@dataclass(frozen=True)
class SetSystem:
    """a collection of column subsets of [n], one per row"""
    n: int
    rows: tuple
    labels: tuple = None

    def __post_init__(self):
        try:
            rows = tuple(frozenset(int(c) for c in r) for r in self.rows)
        except (TypeError, ValueError):
            raise InputError("Set system rows need integer columns, got {}".format(self.rows))
        for r in rows:
            for c in r:
                if not 1 <= c <= self.n:
                    raise InputError("Column {} outside 1..{}".format(c, self.n))
        labels = self.labels
        if labels is None:
            labels = tuple(str(i + 1) for i in range(len(rows)))
        labels = tuple(str(l) for l in labels)
        if len(labels) != len(rows) or len(set(labels)) != len(labels):
            raise InputError("Need one distinct label per row, got {}".format(labels))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    @property
    def k(self):
        return len(self.rows)

    @property
    def m(self):
        """number of non-zero entries"""
        return sum(len(r) for r in self.rows)

    def row(self, label):
        return self.rows[self.labels.index(label)]

    def remove_entry(self, label, col):
        if label not in self.labels or col not in self.row(label):
            raise InputError("No entry ({}, {}) in set system".format(label, col))
        rows = [r - {col} if l == label else r for l, r in zip(self.labels, self.rows)]
        return SetSystem(self.n, tuple(rows), self.labels)

    def with_rows(self, rows):
        return SetSystem(self.n, tuple(rows), self.labels)

    def support_key(self):
        return tuple(sorted(tuple(sorted(r)) for r in self.rows))

    def to_dict(self):
        return {"n": self.n, "rows": [sorted(r) for r in self.rows], "labels": list(self.labels)}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(int(d["n"]), tuple(tuple(r) for r in d["rows"]), d.get("labels"))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError("Set system needs fields n and rows: {}".format(e))


class PolyMatrix:
    """k x n matrix of Polynomial entries; rows carry labels, columns carry integer indices"""

    def __init__(self, labels, columns, entries):
        self.labels = tuple(labels)
        self.columns = tuple(columns)
        self.entries = [list(r) for r in entries]
        assert len(self.entries) == len(self.labels)
        assert all(len(r) == len(self.columns) for r in self.entries)

    @property
    def k(self):
        return len(self.labels)

    def col_index(self, col):
        try:
            return self.columns.index(col)
        except ValueError:
            raise InputError("Column {} not in matrix".format(col))

    def entry(self, i, col):
        return self.entries[i][self.col_index(col)]

    def variables(self):
        out = set()
        for r in self.entries:
            for p in r:
                out.update(p.variables())
        return sorted(out)

    def row_supports(self):
        return tuple(frozenset(c for c, p in zip(self.columns, r) if not p.is_zero) for r in self.entries)

    def minor(self, rows, cols):
        if rows is None:
            rows = range(self.k)
        rows, cols = list(rows), list(cols)
        if len(rows) != len(cols):
            raise InputError("Minor needs as many rows as columns, got {} and {}".format(len(rows), len(cols)))
        idx = [self.col_index(c) for c in cols]
        return poly_det([[self.entries[i][j] for j in idx] for i in rows])

    def substitute(self, mapping):
        return PolyMatrix(self.labels, self.columns, [[p.substitute(mapping) for p in r] for r in self.entries])

    def evaluate(self, assignment):
        return [[p.evaluate(assignment) for p in r] for r in self.entries]

    def nonzero_minors(self, size=None):
        """column sets whose minor is not identically zero"""
        size = self.k if size is None else size
        out = []
        for cols in itertools.combinations(self.columns, size):
            if not self.minor(None, cols).is_zero:
                out.append(frozenset(cols))
        return out


class SymbolicMatrix(PolyMatrix):
    """M_V: entry (i, j) is x_{label_i, j} when j is in row i's support, else 0"""

    def __init__(self, system, gauge=False):
        self.system = system
        self.gauge = gauge
        columns = ([0] if gauge else []) + list(range(1, system.n + 1))
        entries = []
        for label, support in zip(system.labels, system.rows):
            support = set(support) | ({0} if gauge else set())
            entries.append([var_poly(label, c) if c in support else Polynomial() for c in columns])
        super().__init__(system.labels, columns, entries)

    @property
    def n(self):
        return self.system.n


def matrix_from_sets(V, gauge=False, n=None):
    """
    >>> M = matrix_from_sets([{1}])
    >>> M.entry(0, 1).to_text()
    '1 * x[1,1]'
    """
    if not isinstance(V, SetSystem):
        V = [set(r) for r in V]
        if n is None:
            n = max((max(r) for r in V if r), default=0)
        V = SetSystem(n, tuple(V))
    if V.k == 0:
        raise InputError("Set system has no rows")
    return SymbolicMatrix(V, gauge=gauge)


def poly_det(rows):
    """cofactor expansion along the first row, skipping zeros"""
    size = len(rows)
    if size == 0:
        return Polynomial.constant(1)
    if size == 1:
        return rows[0][0]
    out = Polynomial()
    for j, a in enumerate(rows[0]):
        if a.is_zero:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        cof = poly_det(sub)
        if cof.is_zero:
            continue
        term = a * cof
        out = out + term if j % 2 == 0 else out - term
    return out


def minor(M, rows, cols):
    return M.minor(rows, cols)


def poly_arith(a, b, op):
    if op == "add":
        return a + b
    elif op == "sub":
        return a - b
    elif op == "mul":
        return a * b
    raise InputError("Unknown polynomial operation {}".format(op))


def bareiss_det(matrix):
    """
    fraction-free elimination
    >>> bareiss_det([[2, 1], [1, 3]])
    Fraction(5, 1)
    """
    a = [[Fraction(x) for x in r] for r in matrix]
    size = len(a)
    if size == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[size - 1][size - 1]


def _rref(matrix):
    a = [[Fraction(x) for x in r] for r in matrix]
    pivots = []
    row = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        pivot = next((i for i in range(row, len(a)) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        pv = a[row][c]
        a[row] = [x / pv for x in a[row]]
        for i in range(len(a)):
            if i != row and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append(c)
        row += 1
        if row == len(a):
            break
    return a, pivots


def rank(matrix):
    """
    >>> rank([[1, 2], [2, 4]])
    1
    """
    if not matrix or not matrix[0]:
        return 0
    return len(_rref(matrix)[1])


def nullspace(matrix, width=None):
    """basis of {v : matrix v = 0}"""
    if not matrix:
        return [[Fraction(int(i == j)) for j in range(width)] for i in range(width)]
    a, pivots = _rref(matrix)
    cols = len(a[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -a[r][f]
        basis.append(v)
    return basis


def evaluate(obj, assignment):
    """a Polynomial gives a rational; a matrix gives (values, rank)"""
    if isinstance(obj, Polynomial):
        return obj.evaluate(assignment)
    values = obj.evaluate(assignment)
    return values, rank(values)


def random_assignment(variables, rng, positive=True):
    return {v: random_fraction(rng, positive=positive) for v in variables}


def assignment_to_dict(assignment):
    return {v.key: format_fraction(x) for v, x in sorted(assignment.items())}


def assignment_from_dict(d):
    return {VarId.from_key(k): parse_fraction(x) for k, x in d.items()}


@dataclass
class Factorization:
    factors: tuple
    residual: Polynomial
    structured: bool

    def distinct(self):
        return [f for f, _ in self.factors]

    def recompose(self):
        out = self.residual
        for f, mult in self.factors:
            out = out * (f ** mult)
        return out


def _quad_candidates(variables):
    by_row = {}
    for v in variables:
        by_row.setdefault(v.row, set()).add(v.col)
    rows = sorted(by_row)
    for a, b in itertools.combinations(rows, 2):
        common = sorted(by_row[a] & by_row[b])
        for i, j in itertools.combinations(common, 2):
            yield det2(a, b, i, j)


def structured_factorize(f):
    """
    split off single-variable factors and 2x2 determinant factors, with multiplicity

    >>> x = lambda r, c: Polynomial.variable(VarId(r, c))
    >>> fac = structured_factorize(x("1", 1) * x("2", 2))
    >>> [g.to_text() for g in fac.distinct()], fac.structured
    (['1 * x[1,1]', '1 * x[2,2]'], True)
    """
    f = Polynomial.coerce(f)
    if f.is_zero:
        return Factorization((), f, False)
    counts = Counter()
    g = f
    for v in g.variables():
        e = g.min_exponent(v)
        if e:
            counts[Polynomial.variable(v)] += e
            g = g.divide_monomial(v, e)
    found = True
    while found and not g.is_constant:
        found = False
        for d in _quad_candidates(g.variables()):
            q = g.exact_divide(d)
            if q is not None:
                counts[d] += 1
                g = q
                found = True
                break
    factors = tuple(sorted(counts.items(), key=lambda t: _factor_sort_key(t[0])))
    return Factorization(factors, g, g.is_constant)


def _factor_sort_key(p):
    return (p.degree(), p.variables())


def jacobian_matrix(old_vars, new_vars, subst):
    if len(old_vars) != len(new_vars):
        raise InputError("Jacobian needs as many old as new variables, got {} and {}".format(len(old_vars),
                                                                                           len(new_vars)))
    return [[Polynomial.coerce(subst[o]).derivative(n) for n in new_vars] for o in old_vars]


def jacobian_det(old_vars, new_vars, subst):
    """
    >>> a, b = VarId("1", 1), VarId("1", 2)
    >>> jacobian_det([a, b], [a, b], {a: b, b: a}).to_text()
    '-1'
    """
    return poly_det(jacobian_matrix(old_vars, new_vars, subst))


@dataclass
class Reparameterization:
    """the 2x2 change of variables (x, y, xz, zy + w) on rows a, b and columns (i, j)"""
    old: tuple
    new: tuple
    subst: dict = field(default_factory=dict)

    @property
    def x(self):
        return self.new[0]

    @property
    def w(self):
        return self.new[3]

    def jacobian(self):
        return jacobian_det(self.old, self.new, self.subst)

    def apply(self, poly):
        return poly.substitute(self.subst)


def pair_reparameterization(a_row, b_row, i, j):
    """
    >>> r = pair_reparameterization("p", "q", 1, 2)
    >>> r.jacobian().to_text()
    '1 * x[p,1]'
    >>> r.apply(det2("p", "q", 1, 2)).to_text()
    '1 * x[p,1] * x[p^q,1]'
    """
    x, y = VarId(a_row, i), VarId(a_row, j)
    z, w = VarId("{}/{}".format(b_row, a_row), i), VarId("{}^{}".format(a_row, b_row), i)
    X, Y, Z, Wp = (Polynomial.variable(v) for v in (x, y, z, w))
    subst = {VarId(a_row, i): X, VarId(a_row, j): Y, VarId(b_row, i): X * Z, VarId(b_row, j): Z * Y + Wp}
    return Reparameterization((VarId(a_row, i), VarId(a_row, j), VarId(b_row, i), VarId(b_row, j)),
                              (x, y, z, w), subst)
