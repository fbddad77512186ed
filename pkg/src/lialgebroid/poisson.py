"""Polynomial multivector fields, the Schouten bracket, Poisson bivectors and
the algebroids they define.

A p-vector is stored as ``{(i_1 < ... < i_p): coefficient}`` where the
indices are chart variable positions.  The Schouten bracket is computed in
odd coordinates theta_l = d/dx_l:

    [[u, v]] = sum_l (u d<-/dtheta_l)(d v/dx_l)
               - (-1)^((|u|-1)(|v|-1)) (v d<-/dtheta_l)(d u/dx_l)

with right derivatives in theta.  This gives [[X, f]] = X(f) and the usual
Lie bracket on vector fields.  The sharp map is P#(dx_i) = sum_j P_ij d/dx_j,
so for P = d_x ^ d_y one has P#(dx) = d_y and [[P, x]] = -d_y.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebroid import AlgebroidError, AlgebroidPresentation, as_poly
from .coefficients import (
    Chart,
    Poly,
    conjugate,
    is_holomorphic,
    pderiv,
    random_poly,
)
from .exterior import right_derivative, sort_sign, subsets
from .homology import ChainComplexSlice, ComplexError, InhomogeneousError
from .linalg import SparseMatrix
from .matched import MatchedPairData
from .representations import Representation


class NotPoissonError(AlgebroidError):
    pass


class Multivector:
    __slots__ = ("chart", "degree", "terms")

    def __init__(self, chart: Chart, degree: int, terms=None):
        self.chart = chart
        self.degree = degree
        out = {}
        for idx, c in (terms or {}).items():
            idx = tuple(chart.index(v) for v in idx)
            if len(idx) != degree:
                raise AlgebroidError(f"index {idx} does not have length {degree}")
            sign, S = sort_sign(idx)
            if not sign:
                continue
            c = as_poly(chart, c)
            if sign < 0:
                c = -c
            out[S] = out[S] + c if S in out else c
        self.terms = {k: v for k, v in out.items() if v}

    @classmethod
    def _raw(cls, chart, degree, terms):
        m = cls.__new__(cls)
        m.chart = chart
        m.degree = degree
        m.terms = terms
        return m

    @classmethod
    def function(cls, f: Poly) -> "Multivector":
        return cls._raw(f.chart, 0, {(): f} if f else {})

    @classmethod
    def zero(cls, chart, degree):
        return cls._raw(chart, degree, {})

    def coefficient(self, idx) -> Poly:
        sign, S = sort_sign(tuple(self.chart.index(v) for v in idx))
        if not sign:
            return Poly.zero(self.chart)
        c = self.terms.get(S)
        if c is None:
            return Poly.zero(self.chart)
        return c if sign > 0 else -c

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.chart != other.chart:
            raise AlgebroidError("multivectors live on different charts")
        if self.degree != other.degree:
            raise AlgebroidError(f"degree mismatch {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out[k] + v if k in out else v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Multivector._raw(self.chart, self.degree, out)

    def __neg__(self):
        return Multivector._raw(self.chart, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        f = as_poly(self.chart, f)
        out = {k: v * f for k, v in self.terms.items()}
        return Multivector._raw(self.chart, self.degree, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return (self.chart == other.chart and self.degree == other.degree
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def natural_weights(self) -> set:
        """Weights of the terms, d/dx_j counting -weight(x_j)."""
        ws = set()
        for I, c in self.terms.items():
            shift = sum(self.chart.weights[i] for i in I)
            for e in c.terms:
                ws.add(self.chart.monomial_weight(e) - shift)
        return ws

    def is_holomorphic(self) -> bool:
        anti = set(self.chart.antiholomorphic_indices())
        return all(not (set(I) & anti) and is_holomorphic(c) for I, c in self.terms.items())

    def __str__(self):
        if not self.terms:
            return "0"
        v = self.chart.variables
        parts = []
        for I in sorted(self.terms, key=lambda t: tuple(reversed(t))):
            basis = "^".join(f"d_{v[i]}" for i in I)
            c = str(self.terms[I])
            parts.append(f"({c})*{basis}" if basis else f"({c})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Multivector(degree={self.degree}, {self})"


def wedge_multivectors(u: Multivector, v: Multivector) -> Multivector:
    if u.chart != v.chart:
        raise AlgebroidError("multivectors live on different charts")
    out = {}
    for I, f in u.terms.items():
        for K, g in v.terms.items():
            sign, S = sort_sign(I + K)
            if not sign:
                continue
            fg = f * g
            out[S] = out[S] + (fg if sign > 0 else -fg) if S in out else (fg if sign > 0 else -fg)
    return Multivector._raw(u.chart, u.degree + v.degree, {k: c for k, c in out.items() if c})


def _theta_derivative(u: Multivector, l: int) -> Multivector:
    out = {}
    for I, c in u.terms.items():
        sign, rest = right_derivative(I, l)
        if sign:
            out[rest] = c if sign > 0 else -c
    return Multivector._raw(u.chart, u.degree - 1, out)


def _x_derivative(u: Multivector, l: int) -> Multivector:
    out = {}
    for I, c in u.terms.items():
        d = pderiv(c, l)
        if d:
            out[I] = d
    return Multivector._raw(u.chart, u.degree, out)


def schouten(u: Multivector, v: Multivector) -> Multivector:
    """The Schouten-Nijenhuis bracket [[u, v]] of degree |u| + |v| - 1."""
    if u.chart != v.chart:
        raise AlgebroidError("multivectors live on different charts")
    chart = u.chart
    degree = u.degree + v.degree - 1
    if degree < 0:
        return Multivector.zero(chart, 0)
    sym = (u.degree - 1) * (v.degree - 1) % 2
    out = Multivector.zero(chart, degree)
    for l in range(chart.nvars):
        if u.degree:
            a = wedge_multivectors(_theta_derivative(u, l), _x_derivative(v, l))
            out = out + a
        if v.degree:
            b = wedge_multivectors(_theta_derivative(v, l), _x_derivative(u, l))
            out = out + b if sym else out - b
    return out


def vector_field(chart: Chart, components) -> Multivector:
    """Multivector of degree 1 from ``{variable: coefficient}``."""
    return Multivector(chart, 1, {(v,): c for v, c in components.items()})


def conjugate_multivector(u: Multivector) -> Multivector:
    """Conjugate coefficients and swap paired directions."""
    chart = u.chart
    terms = {}
    for I, c in u.terms.items():
        terms[tuple(chart.conjugate_index(i) for i in I)] = conjugate(c)
    return Multivector(chart, u.degree, terms)


def random_multivector(chart: Chart, degree: int, rng, max_degree=2, nterms=2,
                       complex_coeffs=False) -> Multivector:
    terms = {}
    for I in subsets(chart.nvars, degree):
        if rng.random() < 0.6:
            terms[I] = random_poly(chart, rng, max_degree=max_degree, nterms=nterms,
                                   complex_coeffs=complex_coeffs)
    return Multivector(chart, degree, terms)


# --- Poisson bivectors --------------------------------------------------------


class PoissonBivector(Multivector):
    """A bivector P = sum_{i<j} P_ij d_i ^ d_j; Poisson once [[P, P]] = 0."""

    __slots__ = ()

    def __init__(self, chart: Chart, coefficients=None):
        super().__init__(chart, 2, coefficients)

    @classmethod
    def of(cls, u: Multivector) -> "PoissonBivector":
        if u.degree != 2:
            raise AlgebroidError("a Poisson tensor has degree 2")
        return cls._raw(u.chart, 2, dict(u.terms))

    def entry(self, i: int, j: int) -> Poly:
        """P_ij, antisymmetric in (i, j)."""
        if i == j:
            return Poly.zero(self.chart)
        return self.coefficient((i, j))

    def sharp(self, i: int):
        """P#(dx_i) as coefficients of d/dx_j."""
        return tuple(self.entry(i, j) for j in range(self.chart.nvars))

    def poisson_bracket(self, f: Poly, g: Poly) -> Poly:
        """{f, g} = P(df, dg) = sum P_ij f_i g_j."""
        out = Poly.zero(self.chart)
        for (i, j), c in self.terms.items():
            out = out + c * (pderiv(f, i) * pderiv(g, j) - pderiv(f, j) * pderiv(g, i))
        return out

    def weight(self):
        """Common natural weight pi of the terms (None if inhomogeneous)."""
        ws = self.natural_weights()
        if not ws:
            return None
        return ws.pop() if len(ws) == 1 else None


def bivector(chart: Chart, coefficients) -> PoissonBivector:
    """``coefficients`` maps variable-name pairs to polynomials (or strings)."""
    coeffs = {}
    for (a, b), c in coefficients.items():
        coeffs[(a, b)] = chart.parse(c) if isinstance(c, str) else c
    return PoissonBivector(chart, coeffs)


def so3_bivector() -> PoissonBivector:
    """x d_y^d_z + y d_z^d_x + z d_x^d_y on the chart (x, y, z)."""
    chart = Chart(("x", "y", "z"))
    x, y, z = chart.gens()
    return PoissonBivector(chart, {("y", "z"): x, ("z", "x"): y, ("x", "y"): z})


@dataclass
class JacobiReport:
    ok: bool
    witness: Multivector | None = None

    def __bool__(self):
        return self.ok


def jacobi_check(P: Multivector) -> JacobiReport:
    """Passes iff [[P, P]] = 0; otherwise carries the trivector."""
    t = schouten(P, P)
    return JacobiReport(True) if t.is_zero() else JacobiReport(False, t)


def lichnerowicz_diff(P: Multivector, u: Multivector) -> Multivector:
    """d_P u = [[P, u]]."""
    return schouten(P, u)


def _weight_of(P: PoissonBivector) -> int:
    pi = P.weight()
    if pi is None:
        if P.is_zero():
            return 0
        raise InhomogeneousError(f"bivector is not weight homogeneous: {P}")
    return pi


def cotangent_algebroid(P: PoissonBivector, variables=None, check=True) -> AlgebroidPresentation:
    """T^*: generators dx_i, anchor P#, Koszul bracket {dx_i, dx_j} = d P_ij.

    With ``variables`` only the differentials of those coordinates are used;
    the bracket must then close on them.  Generator dx_i gets weight
    pi + weight(x_i) where pi is the weight of P.
    """
    if not isinstance(P, PoissonBivector):
        P = PoissonBivector.of(P)
    if check:
        rep = jacobi_check(P)
        if not rep:
            raise NotPoissonError(f"[[P, P]] = {rep.witness} is not zero")
    chart = P.chart
    idx = list(range(chart.nvars)) if variables is None else [chart.index(v) for v in variables]
    try:
        pi = _weight_of(P)
    except InhomogeneousError:
        pi = max(P.natural_weights())
    pos = {k: a for a, k in enumerate(idx)}
    r = len(idx)
    zero = Poly.zero(chart)
    anchor = [list(P.sharp(i)) for i in idx]
    table = [[[zero] * r for _ in range(r)] for _ in range(r)]
    for a, i in enumerate(idx):
        for b, j in enumerate(idx):
            if a == b:
                continue
            pij = P.entry(i, j)
            for k in range(chart.nvars):
                d = pderiv(pij, k)
                if not d:
                    continue
                if k not in pos:
                    raise AlgebroidError(
                        f"bracket of d{chart.variables[i]}, d{chart.variables[j]} leaves the "
                        f"chosen generators (d{chart.variables[k]} component)")
                table[a][b][pos[k]] = d
    names = [f"d{chart.variables[i]}" for i in idx]
    weights = [pi + chart.weights[i] for i in idx]
    return AlgebroidPresentation(chart, names, weights, anchor, table)


def _poly_det(m):
    n = len(m)
    if n == 0:
        return None
    if n == 1:
        return m[0][0]
    out = None
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _poly_det(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out if out is not None else m[0][0] - m[0][0]


def tangential_poisson_algebroid(P: PoissonBivector, variables=None,
                                 check=True) -> AlgebroidPresentation:
    """Quotient T^*/ker P# in the split case.

    The kernel must be spanned by coordinate differentials dx_k (rows of P
    that vanish identically) and the remaining block of P must have
    nonzero determinant; the quotient is then presented on the remaining
    dx_i with the Koszul bracket reduced modulo the kernel.
    """
    if check:
        rep = jacobi_check(P)
        if not rep:
            raise NotPoissonError(f"[[P, P]] = {rep.witness} is not zero")
    chart = P.chart
    idx = list(range(chart.nvars)) if variables is None else [chart.index(v) for v in variables]
    kernel = [i for i in idx if not any(P.sharp(i))]
    keep = [i for i in idx if i not in kernel]
    block = [[P.entry(i, j) for j in keep] for i in keep]
    det = _poly_det(block)
    if keep and not det:
        raise AlgebroidError("P is not split: its kernel is not spanned by coordinate differentials")
    try:
        pi = _weight_of(P)
    except InhomogeneousError:
        pi = max(P.natural_weights())
    pos = {k: a for a, k in enumerate(keep)}
    r = len(keep)
    zero = Poly.zero(chart)
    table = [[[zero] * r for _ in range(r)] for _ in range(r)]
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            if a == b:
                continue
            pij = P.entry(i, j)
            for k in range(chart.nvars):
                d = pderiv(pij, k)
                if not d or k in kernel:
                    continue
                if k not in pos:
                    raise AlgebroidError("bracket leaves the chosen generators")
                table[a][b][pos[k]] = d
    names = [f"d{chart.variables[i]}" for i in keep]
    weights = [pi + chart.weights[i] for i in keep]
    return AlgebroidPresentation(chart, names, weights, [list(P.sharp(i)) for i in keep], table)


# --- the Lichnerowicz complex -------------------------------------------------


class LichnerowiczComplex:
    """(Lambda^* Theta, d_P) on the multivectors in the given directions.

    Slice bases use the labels of the cotangent cochain complex,
    ``(I, 0, exponent)`` with I indexing ``variables``, so the two can be
    compared matrix for matrix.  A p-vector f d_I sits at weight
    weight(f) - sum weight(x_I) - p * pi.
    """

    def __init__(self, P: PoissonBivector, variables=None, max_degree=None):
        self.P = P
        chart = P.chart
        self.idx = list(range(chart.nvars)) if variables is None else [chart.index(v)
                                                                        for v in variables]
        self.pi = _weight_of(P)
        r = len(self.idx)
        self.max_degree = r if max_degree is None else min(max_degree, r)

    def basis(self, k: int, w: int) -> list:
        chart = self.P.chart
        out = []
        for I in subsets(len(self.idx), k):
            shift = sum(chart.weights[self.idx[i]] for i in I) + k * self.pi
            for exp in chart.monomials_of_weight(w + shift):
                out.append((I, 0, exp))
        return out

    def element(self, label) -> Multivector:
        I, _, exp = label
        chart = self.P.chart
        return Multivector._raw(chart, len(I), {tuple(self.idx[i] for i in I):
                                                Poly.monomial(chart, exp)})

    def differential_matrix(self, k: int, w: int):
        src = self.basis(k, w)
        tgt = self.basis(k + 1, w) if k + 1 <= self.max_degree else []
        index = {lbl: t for t, lbl in enumerate(tgt)}
        pos = {v: a for a, v in enumerate(self.idx)}
        cols = []
        for lbl in src:
            col = {}
            if tgt:
                d = lichnerowicz_diff(self.P, self.element(lbl))
                for J, c in d.terms.items():
                    try:
                        I = tuple(pos[j] for j in J)
                    except KeyError:
                        raise ComplexError("d_P leaves the chosen directions") from None
                    for exp, s in c.terms.items():
                        col[index[(I, 0, exp)]] = s
            cols.append(col)
        return SparseMatrix.from_columns(len(tgt), cols), src, tgt

    def slice(self, w: int) -> ChainComplexSlice:
        bases = {k: self.basis(k, w) for k in range(self.max_degree + 1)}
        matrices = {k: self.differential_matrix(k, w)[0] for k in range(self.max_degree)}
        return ChainComplexSlice(w, bases, matrices)


def lichnerowicz_slice(P: PoissonBivector, w: int, variables=None) -> ChainComplexSlice:
    return LichnerowiczComplex(P, variables).slice(w)


# --- skew-holomorphic Poisson pairs -------------------------------------------


def _lie_gammas(source: AlgebroidPresentation, target_vars):
    """Connection matrices of X -> (L_X dx_k) restricted to the dx_l, l in
    ``target_vars``: Gamma_i[k][l] = d(X_i^{x_k})/dx_l with X_i = a(e_i)."""
    gammas = []
    for i in range(source.rank):
        X = source.anchor[i]
        gammas.append([[pderiv(X[k], l) for l in target_vars] for k in target_vars])
    return gammas


def skew_pair(P1: PoissonBivector, P2: PoissonBivector, tangential=False) -> MatchedPairData:
    """Matched pair (T^*_{P1} on dz_i, T^*_{conj P2} on dzb_i) with the
    Lie-derivative cross actions nabla_alpha beta = L_{P1#alpha} beta and
    nabla_beta alpha = L_{conj(P2)#beta} alpha.

    With ``tangential=True`` both sides are replaced by the split quotients
    T^*/ker P#.
    """
    chart = P1.chart
    if P2.chart != chart:
        raise AlgebroidError("P1 and P2 live on different charts")
    if not chart.has_conjugation():
        raise AlgebroidError("skew pairs need a chart with a conjugation pairing")
    for name, P in (("P1", P1), ("P2", P2)):
        if not P.is_holomorphic():
            raise AlgebroidError(f"{name} is not holomorphic")
    P2bar = PoissonBivector.of(conjugate_multivector(P2))
    hol = list(chart.holomorphic_indices())
    anti = list(chart.antiholomorphic_indices())
    build = tangential_poisson_algebroid if tangential else cotangent_algebroid
    a1 = build(P1, hol)
    a2 = build(P2bar, anti)
    v1 = [chart.index(n[1:]) for n in a1.names]
    v2 = [chart.index(n[1:]) for n in a2.names]
    rep12 = Representation(a1, a2.rank, _lie_gammas(a1, v2))
    rep21 = Representation(a2, a1.rank, _lie_gammas(a2, v1))
    return MatchedPairData(a1, a2, rep12, rep21)


def bihamiltonian_check(P1: PoissonBivector, P2: PoissonBivector) -> JacobiReport:
    """Passes iff [[P1, conj(P2)]] = 0; otherwise carries the trivector."""
    t = schouten(P1, conjugate_multivector(P2))
    return JacobiReport(True) if t.is_zero() else JacobiReport(False, t)
