"""Independent reference computations for the test suite.

Everything here works on sympy expressions and dense sympy matrices and
evaluates defining formulas directly on generator tuples, so it shares no
code path with the library beyond reading presentation data.
"""
from __future__ import annotations

import itertools

import sympy as sp

from lialgebroid.coefficients import Chart, Poly, Scalar


def symbols(chart: Chart):
    return sp.symbols(chart.variables) if chart.nvars > 1 else (
        (sp.Symbol(chart.variables[0]),) if chart.nvars else ())


def scalar_to_sympy(c: Scalar):
    return sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(
        c.im.numerator, c.im.denominator)


def to_sympy(p: Poly):
    xs = symbols(p.chart)
    out = sp.Integer(0)
    for exp, c in p.terms.items():
        term = scalar_to_sympy(c)
        for x, e in zip(xs, exp):
            term *= x ** e
        out += term
    return sp.expand(out)


def from_sympy(expr, chart: Chart) -> Poly:
    xs = symbols(chart)
    expr = sp.expand(expr)
    if not xs:
        return Poly.constant(chart, Scalar(_frac(sp.re(expr)), _frac(sp.im(expr))))
    terms = {}
    for monom, coeff in sp.Poly(expr, *xs).terms():
        re_, im_ = sp.re(coeff), sp.im(coeff)
        terms[tuple(monom)] = Scalar(_frac(re_), _frac(im_))
    return Poly(chart, terms)


def _frac(r):
    from fractions import Fraction

    r = sp.Rational(r)
    return Fraction(int(r.p), int(r.q))


def perm_sign(seq):
    """Sign of the permutation sorting ``seq`` (0 on repeats), by inversions."""
    if len(set(seq)) < len(seq):
        return 0
    inv = sum(1 for a, b in itertools.combinations(range(len(seq)), 2) if seq[a] > seq[b])
    return -1 if inv % 2 else 1


class SymAlgebroid:
    """Presentation data copied into sympy form."""

    def __init__(self, A):
        self.A = A
        self.xs = symbols(A.chart)
        self.r = A.rank
        self.anchor = [[to_sympy(p) for p in row] for row in A.anchor]
        self.c = [[[to_sympy(p) for p in v] for v in row] for row in A.structure]

    def anchor_apply(self, i, f):
        return sp.expand(sum(a * sp.diff(f, x) for a, x in zip(self.anchor[i], self.xs)))


def cochain_values(xi):
    """Dict sorted tuple -> list of sympy values."""
    return {I: [to_sympy(p) for p in v] for I, v in xi.terms.items()}


def _eval(vals, seq, m):
    s = perm_sign(seq)
    if s == 0:
        return [sp.Integer(0)] * m
    v = vals.get(tuple(sorted(seq)))
    if v is None:
        return [sp.Integer(0)] * m
    return [s * x for x in v]


def cartan_differential(A, xi, gammas=None):
    """(delta xi)(e_{i_0},...,e_{i_p}) straight from the Cartan formula,
    with the optional -xi(..)(nabla s) correction of the twisted version.
    Returns {sorted tuple: [sympy values]}."""
    S = SymAlgebroid(A)
    m = xi.value_rank
    vals = cochain_values(xi)
    G = None
    if gammas is not None:
        G = [[[to_sympy(p) for p in row] for row in g] for g in gammas]
    p = xi.degree
    out = {}
    for J in itertools.combinations(range(S.r), p + 1):
        acc = [sp.Integer(0)] * m
        for a in range(p + 1):
            rest = J[:a] + J[a + 1:]
            inner = _eval(vals, rest, m)
            sgn = (-1) ** a
            for t in range(m):
                term = S.anchor_apply(J[a], inner[t])
                if G is not None:
                    term -= sum(G[J[a]][t][b] * inner[b] for b in range(m))
                acc[t] += sgn * term
        for a, b in itertools.combinations(range(p + 1), 2):
            rest = tuple(J[k] for k in range(p + 1) if k not in (a, b))
            sgn = (-1) ** (a + b)
            for k in range(S.r):
                ck = S.c[J[a]][J[b]][k]
                if ck == 0:
                    continue
                v = _eval(vals, (k,) + rest, m)
                for t in range(m):
                    acc[t] += sgn * ck * v[t]
        acc = [sp.expand(x) for x in acc]
        if any(x != 0 for x in acc):
            out[J] = acc
    return out


def same_cochain(xi, expected) -> bool:
    got = cochain_values(xi)
    keys = set(got) | set(expected)
    for k in keys:
        a = got.get(k, [0] * xi.value_rank)
        b = expected.get(k, [0] * xi.value_rank)
        if any(sp.expand(x - y) != 0 for x, y in zip(a, b)):
            return False
    return True


# --- linear algebra ----------------------------------------------------------


def dense_rank(m) -> int:
    """Rank of a SparseMatrix via sympy's Matrix.rank."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    M = sp.zeros(m.nrows, m.ncols)
    for (i, j), v in m.entries.items():
        M[i, j] = scalar_to_sympy(v)
    return M.rank(simplify=True)


def dense_betti(slice_) -> tuple:
    ranks = {k: dense_rank(slice_.matrix(k)) for k in slice_.degrees}
    return tuple(slice_.dim(k) - ranks[k] - ranks.get(k - 1, 0) for k in slice_.degrees)


def ce_betti_point(structure) -> tuple:
    """Chevalley-Eilenberg Betti numbers of a Lie algebra from its constants,
    assembling each d_k as a dense sympy matrix on the basis of k-subsets."""
    r = len(structure)
    bases = [list(itertools.combinations(range(r), k)) for k in range(r + 1)]
    ranks = []
    for k in range(r + 1):
        if k == r:
            ranks.append(0)
            continue
        src, tgt = bases[k], bases[k + 1]
        col = {I: n for n, I in enumerate(src)}
        M = sp.zeros(len(tgt), len(src))
        for row, J in enumerate(tgt):
            for a, b in itertools.combinations(range(k + 1), 2):
                rest = tuple(J[t] for t in range(k + 1) if t not in (a, b))
                for kk in range(r):
                    c = structure[J[a]][J[b]][kk]
                    if c == 0:
                        continue
                    seq = (kk,) + rest
                    s = perm_sign(seq)
                    if s:
                        M[row, col[tuple(sorted(seq))]] += (-1) ** (a + b) * s * c
        ranks.append(M.rank())
    return tuple(len(bases[k]) - ranks[k] - (ranks[k - 1] if k else 0) for k in range(r + 1))


# --- Poisson ------------------------------------------------------------------


def poisson_bracket(P, f, g):
    """{f, g} = sum_{i,j} P^{ij} d_i f d_j g with P^{ji} = -P^{ij}."""
    xs = symbols(P.chart)
    n = len(xs)
    out = 0
    for i in range(n):
        for j in range(n):
            pij = _entry(P, i, j)
            if pij != 0:
                out += pij * sp.diff(f, xs[i]) * sp.diff(g, xs[j])
    return sp.expand(out)


def _entry(P, i, j):
    if i == j:
        return sp.Integer(0)
    if i < j:
        return to_sympy(P.coefficient((i, j)))
    return -to_sympy(P.coefficient((j, i)))


def jacobiators(P) -> dict:
    """Cyclic sums {x_i,{x_j,x_k}} + ... for i < j < k."""
    xs = symbols(P.chart)
    out = {}
    for i, j, k in itertools.combinations(range(len(xs)), 3):
        a, b, c = xs[i], xs[j], xs[k]
        val = sp.expand(poisson_bracket(P, a, poisson_bracket(P, b, c))
                        + poisson_bracket(P, b, poisson_bracket(P, c, a))
                        + poisson_bracket(P, c, poisson_bracket(P, a, b)))
        out[(i, j, k)] = val
    return out


def koszul_structure(P):
    """{dx_i, dx_j} = d{x_i, x_j}: the dx_k coefficient is d_k P^{ij}."""
    xs = symbols(P.chart)
    n = len(xs)
    return [[[sp.expand(sp.diff(_entry(P, i, j), xs[k])) for k in range(n)] for j in range(n)]
            for i in range(n)]


# --- almost complex structures ----------------------------------------------------


def nijenhuis_point(structure, J):
    """N(e_a, e_b) for a Lie algebra over a point with constant J, by
    matrix arithmetic: J e_i is column i of J."""
    r = len(structure)
    Jm = sp.Matrix(J)

    def br(u, v):
        return sp.Matrix([sum(u[i] * v[j] * structure[i][j][k]
                              for i in range(r) for j in range(r)) for k in range(r)])

    out = {}
    for a, b in itertools.combinations(range(r), 2):
        ea, eb = sp.eye(r)[:, a], sp.eye(r)[:, b]
        Ja, Jb = Jm * ea, Jm * eb
        N = br(Ja, Jb) - Jm * br(Ja, eb) - Jm * br(ea, Jb) - br(ea, eb)
        out[(a, b)] = list(N)
    return out
