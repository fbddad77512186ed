"""Almost complex structures on algebroids, the +-i eigen-splitting of
A (x) C, the Nijenhuis tensor and the splitting of d by bidegree.

Convention: J e_i = sum_k J[k][i] e_k, and J_M acts on coordinate fields the
same way, J_M d_j = sum_k J_M[k][j] d_k.  Compatibility with the anchor is
J_M a = a J as matrices, where the anchor matrix has a(e_i) in column i.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebroid import (
    AlgebroidError,
    AlgebroidPresentation,
    Cochain,
    Section,
    as_poly,
    bracket_sections,
    change_frame,
    differential,
)
from .coefficients import I as IMAG
from .coefficients import ONE, ZERO, Poly, Scalar
from .homology import CochainComplex, FilteredComplex
from .linalg import rref

COMPONENTS = ("d'", "d", "dbar", "d''")
_SHIFTS = {"d'": (2, -1), "d": (1, 0), "dbar": (0, 1), "d''": (-1, 2)}


class AlmostComplexStructure:
    def __init__(self, algebroid: AlgebroidPresentation, J, JM=None):
        A = algebroid
        chart = A.chart
        if A.rank % 2:
            raise AlgebroidError(f"an almost complex structure needs even rank (got {A.rank})")
        r, n = A.rank, chart.nvars
        if len(J) != r or any(len(row) != r for row in J):
            raise AlgebroidError(f"J must be {r}x{r}")
        if JM is None:
            JM = [[0] * n for _ in range(n)]
        if len(JM) != n or any(len(row) != n for row in JM):
            raise AlgebroidError(f"J_M must be {n}x{n}")
        self.algebroid = A
        self.J = tuple(tuple(as_poly(chart, x) for x in row) for row in J)
        self.JM = tuple(tuple(as_poly(chart, x) for x in row) for row in JM)

    @property
    def rank(self):
        return self.algebroid.rank

    def apply(self, s: Section) -> Section:
        """J s = sum_i s_i J e_i."""
        r = self.rank
        zero = Poly.zero(self.algebroid.chart)
        out = [zero] * r
        for i, c in enumerate(s.coeffs):
            if c:
                for k in range(r):
                    if self.J[k][i]:
                        out[k] = out[k] + self.J[k][i] * c
        return Section(self.algebroid, tuple(out))

    def is_constant(self) -> bool:
        return all(p.is_constant() for row in self.J for p in row)

    def constant_matrix(self):
        if not self.is_constant():
            raise AlgebroidError("the splitting needs a constant J")
        return [[p.constant_term() for p in row] for row in self.J]


def standard_j(r: int):
    """Block matrix with J e_{2k} = e_{2k+1} and J e_{2k+1} = -e_{2k}."""
    if r % 2:
        raise AlgebroidError("standard J needs even rank")
    J = [[0] * r for _ in range(r)]
    for k in range(0, r, 2):
        J[k + 1][k] = 1
        J[k][k + 1] = -1
    return J


def _matmul(a, b, chart):
    zero = Poly.zero(chart)
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[zero] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            if not a[i][t]:
                continue
            for j in range(m):
                if b[t][j]:
                    out[i][j] = out[i][j] + a[i][t] * b[t][j]
    return out


@dataclass
class ACSReport:
    square: bool
    compatible: bool
    witness: dict | None = None

    @property
    def ok(self):
        return self.square and self.compatible

    def __bool__(self):
        return self.ok


def validate_acs(S: AlmostComplexStructure) -> ACSReport:
    """J^2 = -1 and J_M a = a J, exactly."""
    A = S.algebroid
    chart = A.chart
    r, n = A.rank, chart.nvars
    witness = None
    J2 = _matmul(S.J, S.J, chart)
    square = True
    for i in range(r):
        for j in range(r):
            want = Poly.constant(chart, -1 if i == j else 0)
            if J2[i][j] != want:
                square = False
                witness = {"identity": "J^2 = -1", "entry": (i, j), "value": str(J2[i][j])}
                break
        if not square:
            break
    amat = [[A.anchor[i][l] for i in range(r)] for l in range(n)]
    compatible = True
    if n:
        lhs = _matmul(S.JM, amat, chart)
        rhs = _matmul(amat, S.J, chart)
        for l in range(n):
            for i in range(r):
                if lhs[l][i] != rhs[l][i]:
                    compatible = False
                    if witness is None:
                        witness = {"identity": "J_M a = a J", "entry": (chart.variables[l], A.names[i]),
                                   "value": str(lhs[l][i] - rhs[l][i])}
                    break
            if not compatible:
                break
    return ACSReport(square, compatible, witness)


# --- the eigen-splitting ------------------------------------------------------


@dataclass
class SplitFrames:
    """Frames of A^{1,0} and A^{0,1}; each vector lists the coefficients of
    the original generators."""

    holomorphic: list
    antiholomorphic: list
    projector: list = field(repr=False, default=None)
    conjugate_projector: list = field(repr=False, default=None)


def _column_basis(M):
    cols = [[row[j] for row in M] for j in range(len(M[0]))]
    # pivot columns of M form a basis of its column space
    _, pivots = rref([list(r) for r in M], len(M[0]))
    return [cols[j] for j in pivots]


def split_complexified(S: AlmostComplexStructure) -> SplitFrames:
    """Images of the projectors (1 -+ iJ)/2 on the generators."""
    J = S.constant_matrix()
    r = S.rank
    half = Scalar(1, 0) / 2
    plus = [[((ONE if i == j else ZERO) - IMAG * J[i][j]) * half for j in range(r)] for i in range(r)]
    minus = [[((ONE if i == j else ZERO) + IMAG * J[i][j]) * half for j in range(r)] for i in range(r)]
    return SplitFrames(_column_basis(plus), _column_basis(minus), plus, minus)


def complexified_presentation(S: AlmostComplexStructure) -> AlgebroidPresentation:
    """A (x) C presented on the split frame: the first r/2 generators span
    A^{1,0}, the last r/2 span A^{0,1}."""
    frames = split_complexified(S)
    cols = frames.holomorphic + frames.antiholomorphic
    r = S.rank
    P = [[cols[a][i] for a in range(r)] for i in range(r)]
    m = r // 2
    names = [f"u{k + 1}" for k in range(m)] + [f"ub{k + 1}" for k in range(m)]
    return change_frame(S.algebroid, P, names)


# --- Nijenhuis tensor ---------------------------------------------------------


@dataclass
class NijenhuisReport:
    values: dict
    witness: tuple | None = None

    @property
    def ok(self):
        return self.witness is None

    def __bool__(self):
        return self.ok


def nijenhuis_pair(S: AlmostComplexStructure, a: Section, b: Section) -> Section:
    """N(a, b) = {Ja, Jb} - J{Ja, b} - J{a, Jb} - {a, b}."""
    A = S.algebroid
    Ja, Jb = S.apply(a), S.apply(b)
    return (bracket_sections(A, Ja, Jb) - S.apply(bracket_sections(A, Ja, b))
            - S.apply(bracket_sections(A, a, Jb)) - bracket_sections(A, a, b))


def nijenhuis(S: AlmostComplexStructure) -> NijenhuisReport:
    A = S.algebroid
    gens = [A.generator(i) for i in range(A.rank)]
    values = {}
    witness = None
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            N = nijenhuis_pair(S, gens[i], gens[j])
            values[(A.names[i], A.names[j])] = N
            if witness is None and not N.is_zero():
                witness = (A.names[i], A.names[j])
    return NijenhuisReport(values, witness)


# --- bidegrees ----------------------------------------------------------------


class BigradedCochain:
    """A cochain of bidegree (p, q) on a split presentation:
    ``terms[(I, K)]`` is the coefficient of u^I ^ ub^K, with I and K
    indexing the (1,0) and (0,1) frames separately."""

    def __init__(self, presentation, p, q, terms=None):
        self.presentation = presentation
        self.p = p
        self.q = q
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def from_cochain(cls, xi: Cochain, p: int, q: int) -> "BigradedCochain":
        m = xi.presentation.rank // 2
        terms = {}
        for idx, (f,) in xi.terms.items():
            I = tuple(i for i in idx if i < m)
            K = tuple(k - m for k in idx if k >= m)
            if (len(I), len(K)) == (p, q):
                terms[(I, K)] = f
        return cls(xi.presentation, p, q, terms)

    def to_cochain(self) -> Cochain:
        m = self.presentation.rank // 2
        return Cochain(self.presentation, self.p + self.q,
                       {I + tuple(k + m for k in K): (f,) for (I, K), f in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, BigradedCochain):
            return NotImplemented
        return ((self.p, self.q) == (other.p, other.q) and self.terms == other.terms)

    def __repr__(self):
        return f"BigradedCochain(({self.p},{self.q}), {len(self.terms)} terms)"


def bidegree_of(idx, m):
    p = sum(1 for i in idx if i < m)
    return p, len(idx) - p


def bidegree_components(xi: Cochain) -> dict:
    """Split a cochain on a split presentation into its bidegree parts."""
    m = xi.presentation.rank // 2
    found = sorted({bidegree_of(idx, m) for idx in xi.terms})
    return {pq: BigradedCochain.from_cochain(xi, *pq) for pq in found}


def bidegree_split(S, xi, component: str) -> BigradedCochain:
    """One of the four pieces d', d, dbar, d'' of d applied to xi.

    ``S`` is an AlmostComplexStructure (its split presentation is used) or
    a split presentation directly; ``xi`` is a BigradedCochain or a pure
    bidegree Cochain on that presentation.
    """
    if component not in _SHIFTS:
        raise ValueError(f"unknown component {component!r}; expected one of {COMPONENTS}")
    if isinstance(xi, BigradedCochain):
        p, q = xi.p, xi.q
        xi = xi.to_cochain()
    else:
        parts = bidegree_components(xi)
        if len(parts) > 1:
            raise AlgebroidError("cochain is not of pure bidegree")
        p, q = next(iter(parts)) if parts else (xi.degree, 0)
    B = xi.presentation
    if isinstance(S, AlgebroidPresentation) and S is not B:
        raise AlgebroidError("cochain is not on the split presentation")
    dp, dq = _SHIFTS[component]
    return BigradedCochain.from_cochain(differential(B, xi), p + dp, q + dq)


def filtration_slices(S, w: int) -> FilteredComplex:
    """The weight-w slice of the complexified complex with F_p C^k spanned
    by C^{r,s} (r + s = k) for r >= p - k, that is 2r + s >= p."""
    B = S if isinstance(S, AlgebroidPresentation) else complexified_presentation(S)
    m = B.rank // 2
    cx = CochainComplex(B).slice(w)
    filt = {k: [2 * bidegree_of(I, m)[0] + bidegree_of(I, m)[1] for (I, _, _) in cx.bases[k]]
            for k in cx.degrees}
    return FilteredComplex(cx, filt)
