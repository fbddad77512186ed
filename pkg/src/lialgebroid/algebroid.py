"""Lie algebroid presentations on a chart, their axioms, and the
Cartan-Eilenberg cochain differential.

A presentation stores only generator data: the anchor a(e_i) as a row of
polynomial coefficients of the coordinate fields, and structure functions
c[i][j][k] with {e_i, e_j} = sum_k c[i][j][k] e_k.  Everything else (brackets
of arbitrary sections, the differential) is derived through the Leibniz rule.

Sign conventions
----------------
Cochains are stored on strictly increasing generator tuples.  Evaluating on
an unsorted tuple multiplies by the sign of the sorting permutation (see
:mod:`lialgebroid.exterior`); repeated generators give zero.  In the bracket
sum of the differential the bracket is placed first and both hatted slots are
removed::

    (d xi)(a_1..a_{p+1}) = sum_i (-1)^(i-1) a(a_i) xi(..^a_i..)
                         + sum_{i<j} (-1)^(i+j) xi({a_i, a_j}, ..^a_i..^a_j..)
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .coefficients import (
    Chart,
    ChartMismatchError,
    Poly,
    Scalar,
    is_homogeneous,
    monomials_up_to_degree,
    pderiv,
    random_poly,
)
from .exterior import remove_position, sort_sign, subsets, wedge_indices
from .linalg import inverse


class AlgebroidError(ValueError):
    pass


class MalformedPresentationError(AlgebroidError):
    pass


class PresentationMismatchError(AlgebroidError):
    pass


def as_poly(chart: Chart, x) -> Poly:
    if isinstance(x, Poly):
        if x.chart != chart:
            raise ChartMismatchError("polynomial lives on a different chart")
        return x
    if isinstance(x, str):
        return chart.parse(x)
    if isinstance(x, (int, Fraction, Scalar)):
        return Poly.constant(chart, x)
    raise TypeError(f"cannot interpret {x!r} as a polynomial")


class AlgebroidPresentation:
    """Free Lie algebroid data (A, a, {,}) over the polynomial ring of a chart.

    ``anchor[i][j]`` is the coefficient of d/dx_j in a(e_i);
    ``structure[i][j][k]`` is the e_k component of {e_i, e_j}.
    """

    def __init__(self, chart: Chart, names, weights, anchor, structure):
        self.chart = chart
        self.names = tuple(names)
        r = len(self.names)
        if len(set(self.names)) != r:
            raise MalformedPresentationError(f"duplicate generator names {self.names}")
        self.rank = r
        self.weights = tuple(int(w) for w in (weights if weights is not None else [0] * r))
        if len(self.weights) != r:
            raise MalformedPresentationError("one weight per generator required")
        n = chart.nvars
        if len(anchor) != r or any(len(row) != n for row in anchor):
            raise MalformedPresentationError(f"anchor must be a {r}x{n} matrix")
        self.anchor = tuple(tuple(as_poly(chart, x) for x in row) for row in anchor)
        if len(structure) != r or any(len(row) != r or any(len(v) != r for v in row)
                                      for row in structure):
            raise MalformedPresentationError(f"structure table must be {r}x{r}x{r}")
        self.structure = tuple(tuple(tuple(as_poly(chart, x) for x in v) for v in row)
                               for row in structure)
        self._index = {name: k for k, name in enumerate(self.names)}
        self._anchor_terms = tuple(
            tuple((j, p) for j, p in enumerate(row) if p) for row in self.anchor)
        self._brackets = {}
        for i in range(r):
            for j in range(r):
                self._brackets[(i, j)] = tuple(
                    (k, p) for k, p in enumerate(self.structure[i][j]) if p)

    @classmethod
    def from_brackets(cls, chart, names, anchor=None, brackets=None, weights=None):
        """Build from the brackets {e_i, e_j} for i < j.

        ``brackets`` maps ``(i, j)`` (indices or names) to ``{k: poly}``;
        the table is filled antisymmetrically.  A missing anchor is zero.
        """
        names = tuple(names)
        r = len(names)
        index = {n: k for k, n in enumerate(names)}

        def idx(x):
            return index[x] if isinstance(x, str) else int(x)

        zero = Poly.zero(chart)
        if anchor is None:
            anchor = [[zero] * chart.nvars for _ in range(r)]
        elif isinstance(anchor, dict):
            rows = [[zero] * chart.nvars for _ in range(r)]
            for gen, field_ in anchor.items():
                for var, p in field_.items():
                    rows[idx(gen)][chart.index(var)] = as_poly(chart, p)
            anchor = rows
        table = [[[zero] * r for _ in range(r)] for _ in range(r)]
        for (a, b), vec in (brackets or {}).items():
            i, j = idx(a), idx(b)
            if i == j:
                raise MalformedPresentationError(f"bracket of {names[i]} with itself must vanish")
            for k, p in vec.items():
                p = as_poly(chart, p)
                table[i][j][idx(k)] = p
                table[j][i][idx(k)] = -p
        return cls(chart, names, weights, anchor, table)

    def index(self, gen) -> int:
        if isinstance(gen, int):
            if 0 <= gen < self.rank:
                return gen
            raise IndexError(f"generator index {gen} out of range")
        return self._index[gen]

    def bracket_terms(self, i, j):
        """Nonzero ``(k, c[i][j][k])`` pairs."""
        return self._brackets[(i, j)]

    def anchor_apply(self, i: int, f: Poly) -> Poly:
        """a(e_i)(f)."""
        out = Poly.zero(self.chart)
        for j, coef in self._anchor_terms[i]:
            d = pderiv(f, j)
            if d:
                out = out + coef * d
        return out

    def generator(self, i) -> "Section":
        i = self.index(i)
        z = Poly.zero(self.chart)
        one = Poly.constant(self.chart, 1)
        return Section(self, tuple(one if k == i else z for k in range(self.rank)))

    def section(self, coeffs) -> "Section":
        return Section(self, tuple(as_poly(self.chart, c) for c in coeffs))

    def zero_section(self) -> "Section":
        return Section(self, (Poly.zero(self.chart),) * self.rank)

    def structure_is_antisymmetric(self):
        """First ``(i, j, k)`` where the table is not antisymmetric, or None."""
        r = self.rank
        for i in range(r):
            for j in range(i, r):
                for k in range(r):
                    if self.structure[i][j][k] != -self.structure[j][i][k]:
                        return (i, j, k)
        return None

    def __repr__(self):
        return (f"AlgebroidPresentation(rank={self.rank}, names={self.names}, "
                f"chart={self.chart.variables})")


class Section:
    """sum_i coeffs[i] e_i."""

    __slots__ = ("presentation", "coeffs")

    def __init__(self, presentation: AlgebroidPresentation, coeffs):
        if len(coeffs) != presentation.rank:
            raise AlgebroidError(
                f"section needs {presentation.rank} coefficients, got {len(coeffs)}")
        self.presentation = presentation
        self.coeffs = tuple(coeffs)

    def _check(self, other):
        if not isinstance(other, Section) or other.presentation is not self.presentation:
            raise PresentationMismatchError("sections belong to different presentations")

    def __add__(self, other):
        self._check(other)
        return Section(self.presentation, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return Section(self.presentation, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Section(self.presentation, tuple(-a for a in self.coeffs))

    def __mul__(self, f):
        if not isinstance(f, Poly):
            f = as_poly(self.presentation.chart, f)
        return Section(self.presentation, tuple(f * a for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Section):
            return NotImplemented
        return self.presentation is other.presentation and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        names = self.presentation.names
        parts = [f"({c})*{n}" for c, n in zip(self.coeffs, names) if c]
        return "Section(" + (" + ".join(parts) or "0") + ")"


def anchor_field(s: Section):
    """a(s) as a tuple of coefficients of the coordinate fields."""
    A = s.presentation
    n = A.chart.nvars
    out = [Poly.zero(A.chart)] * n
    for i, f in enumerate(s.coeffs):
        if not f:
            continue
        for j, coef in A._anchor_terms[i]:
            out[j] = out[j] + f * coef
    return tuple(out)


def apply_field(vf, f: Poly) -> Poly:
    out = Poly.zero(f.chart)
    for j, coef in enumerate(vf):
        if coef:
            d = pderiv(f, j)
            if d:
                out = out + coef * d
    return out


def field_bracket(X, Y):
    """Lie bracket of polynomial vector fields given by coefficient tuples."""
    return tuple(apply_field(X, Y[k]) - apply_field(Y, X[k]) for k in range(len(X)))


def apply_section(s: Section, f: Poly) -> Poly:
    """a(s)(f)."""
    A = s.presentation
    out = Poly.zero(A.chart)
    for i, c in enumerate(s.coeffs):
        if c:
            d = A.anchor_apply(i, f)
            if d:
                out = out + c * d
    return out


def bracket_sections(A: AlgebroidPresentation, s1: Section, s2: Section) -> Section:
    """{s1, s2}, extended from the generators by the Leibniz rule."""
    if s1.presentation is not A or s2.presentation is not A:
        raise PresentationMismatchError("sections do not belong to this presentation")
    r = A.rank
    zero = Poly.zero(A.chart)
    out = [zero] * r
    f, g = s1.coeffs, s2.coeffs
    for i in range(r):
        if not f[i]:
            continue
        for j in range(r):
            if not g[j]:
                continue
            terms = A.bracket_terms(i, j)
            if terms:
                fg = f[i] * g[j]
                for k, c in terms:
                    out[k] = out[k] + fg * c
    for i in range(r):
        if f[i]:
            for j in range(r):
                if g[j]:
                    d = A.anchor_apply(i, g[j])
                    if d:
                        out[j] = out[j] + f[i] * d
        if g[i]:
            for j in range(r):
                if f[j]:
                    d = A.anchor_apply(i, f[j])
                    if d:
                        out[j] = out[j] - g[i] * d
    return Section(A, tuple(out))


class Cochain:
    """An element of Gamma(Lambda^p A^* (x) E^*), E free of rank ``value_rank``.

    ``terms`` maps strictly increasing generator tuples to ``value_rank``-tuples
    of polynomials; all-zero values are not stored.
    """

    __slots__ = ("presentation", "degree", "value_rank", "terms")

    def __init__(self, presentation, degree, terms=None, value_rank=1):
        self.presentation = presentation
        self.degree = degree
        self.value_rank = value_rank
        chart = presentation.chart
        clean = {}
        for I, v in (terms or {}).items():
            I = tuple(I)
            if len(I) != degree:
                raise AlgebroidError(f"index {I} does not have degree {degree}")
            if not isinstance(v, (tuple, list)):
                v = (v,)
            if len(v) != value_rank:
                raise AlgebroidError(f"value at {I} must have {value_rank} components")
            sign, S = sort_sign(I)
            if sign == 0:
                continue
            if any(k < 0 or k >= presentation.rank for k in S):
                raise AlgebroidError(f"index {I} out of range")
            v = tuple(as_poly(chart, x) for x in v)
            if sign < 0:
                v = tuple(-x for x in v)
            if S in clean:
                v = tuple(a + b for a, b in zip(clean[S], v))
            if any(v):
                clean[S] = v
            else:
                clean.pop(S, None)
        self.terms = clean

    @classmethod
    def _raw(cls, presentation, degree, terms, value_rank=1):
        c = object.__new__(cls)
        c.presentation = presentation
        c.degree = degree
        c.value_rank = value_rank
        c.terms = terms
        return c

    @classmethod
    def zero(cls, presentation, degree, value_rank=1):
        return cls._raw(presentation, degree, {}, value_rank)

    @classmethod
    def function(cls, presentation, f):
        """A degree-0 scalar cochain."""
        return cls(presentation, 0, {(): f})

    def value(self, seq):
        """Value on a generator tuple, with the Koszul sign of sorting it."""
        sign, S = sort_sign(tuple(seq))
        zero = Poly.zero(self.presentation.chart)
        if sign == 0:
            return (zero,) * self.value_rank
        v = self.terms.get(S)
        if v is None:
            return (zero,) * self.value_rank
        return v if sign > 0 else tuple(-x for x in v)

    def coefficient(self, seq) -> Poly:
        return self.value(seq)[0]

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if not isinstance(other, Cochain):
            raise TypeError("expected a Cochain")
        if other.presentation is not self.presentation:
            raise PresentationMismatchError("cochains belong to different presentations")
        if other.degree != self.degree or other.value_rank != self.value_rank:
            raise AlgebroidError("degree or value rank mismatch")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for I, v in other.terms.items():
            if I in out:
                s = tuple(a + b for a, b in zip(out[I], v))
                if any(s):
                    out[I] = s
                else:
                    del out[I]
            else:
                out[I] = v
        return Cochain._raw(self.presentation, self.degree, out, self.value_rank)

    def __neg__(self):
        return Cochain._raw(self.presentation, self.degree,
                            {I: tuple(-x for x in v) for I, v in self.terms.items()},
                            self.value_rank)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        f = as_poly(self.presentation.chart, f)
        out = {}
        for I, v in self.terms.items():
            w = tuple(f * x for x in v)
            if any(w):
                out[I] = w
        return Cochain._raw(self.presentation, self.degree, out, self.value_rank)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.presentation is other.presentation and self.degree == other.degree
                and self.value_rank == other.value_rank and self.terms == other.terms)

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms)))

    def __repr__(self):
        names = self.presentation.names
        parts = []
        for I, v in sorted(self.terms.items()):
            lbl = "^".join(names[k] + "*" for k in I) or "1"
            val = v[0] if self.value_rank == 1 else "(" + ", ".join(map(str, v)) + ")"
            parts.append(f"({val}) {lbl}")
        return f"Cochain[deg {self.degree}](" + (" + ".join(parts) or "0") + ")"


def evaluate(xi: Cochain, *sections: Section):
    """xi(s_1, ..., s_p) for arbitrary sections, by multilinear expansion."""
    if len(sections) != xi.degree:
        raise AlgebroidError(f"expected {xi.degree} arguments")
    chart = xi.presentation.chart
    out = [Poly.zero(chart)] * xi.value_rank
    for I, v in xi.terms.items():
        # sum over permutations of I assigned to the argument slots
        for perm, sign in _signed_permutations(I):
            coef = Poly.constant(chart, sign)
            for s, k in zip(sections, perm):
                coef = coef * s.coeffs[k]
                if not coef:
                    break
            if coef:
                out = [o + coef * x for o, x in zip(out, v)]
    return tuple(out)


def _signed_permutations(I):
    for perm in itertools.permutations(I):
        sign, _ = sort_sign(perm)
        yield perm, sign


def differential(A: AlgebroidPresentation, xi: Cochain, gammas=None) -> Cochain:
    """The Cartan-Eilenberg differential, optionally twisted.

    ``gammas[j][a][b]`` is the s_b coefficient of nabla_{e_j} s_a; the term
    -xi(.., nabla_{a_i} s) then enters each anchor summand.
    """
    if xi.presentation is not A:
        raise PresentationMismatchError("cochain does not belong to this presentation")
    r = A.rank
    p = xi.degree
    m = xi.value_rank
    if p + 1 > r:
        return Cochain.zero(A, p + 1, m)
    zero = Poly.zero(A.chart)
    terms = xi.terms
    out = {}
    for J in subsets(r, p + 1):
        acc = [zero] * m
        touched = False
        for pos, j in enumerate(J):
            v = terms.get(remove_position(J, pos))
            if v is None:
                continue
            neg = pos & 1
            for a in range(m):
                d = A.anchor_apply(j, v[a])
                if gammas is not None:
                    row = gammas[j][a]
                    for b in range(m):
                        g = row[b]
                        if g and v[b]:
                            d = d - g * v[b]
                if d:
                    acc[a] = acc[a] - d if neg else acc[a] + d
                    touched = True
        for pi in range(len(J)):
            for pl in range(pi + 1, len(J)):
                bterms = A.bracket_terms(J[pi], J[pl])
                if not bterms:
                    continue
                rest = remove_position(remove_position(J, pl), pi)
                base = -1 if (pi + pl) & 1 else 1
                for k, c in bterms:
                    sign, K = sort_sign((k,) + rest)
                    if not sign:
                        continue
                    v = terms.get(K)
                    if v is None:
                        continue
                    cs = c if base * sign > 0 else -c
                    for a in range(m):
                        if v[a]:
                            acc[a] = acc[a] + cs * v[a]
                            touched = True
        if touched and any(acc):
            out[J] = tuple(acc)
    return Cochain._raw(A, p + 1, out, m)


def cochain_diff(A: AlgebroidPresentation, xi: Cochain) -> Cochain:
    """delta xi for a scalar (or trivially twisted) cochain."""
    return differential(A, xi)


def wedge(xi: Cochain, eta: Cochain) -> Cochain:
    """Exterior product of scalar cochains: e*_I ^ e*_K = sign e*_{I+K}."""
    if xi.presentation is not eta.presentation:
        raise PresentationMismatchError("cochains belong to different presentations")
    if xi.value_rank != 1 or eta.value_rank != 1:
        raise AlgebroidError("wedge is defined for scalar cochains")
    A = xi.presentation
    out = {}
    for I, (f,) in xi.terms.items():
        for K, (g,) in eta.terms.items():
            sign, S = wedge_indices(I, K)
            if not sign:
                continue
            fg = f * g
            if sign < 0:
                fg = -fg
            out[S] = out.get(S, Poly.zero(A.chart)) + fg
    return Cochain._raw(A, xi.degree + eta.degree,
                        {S: (v,) for S, v in out.items() if v}, 1)


def cochain_weight(xi: Cochain, module_weights=None):
    """Common weight of all terms (e*_i carries -w_i, s*_a carries -u_a), or
    None if xi is zero or inhomogeneous."""
    A = xi.presentation
    ws = set()
    for I, v in xi.terms.items():
        base = -sum(A.weights[k] for k in I)
        for a, f in enumerate(v):
            u = module_weights[a] if module_weights is not None else 0
            for e in f.terms:
                ws.add(A.chart.monomial_weight(e) + base - u)
    return ws.pop() if len(ws) == 1 else None


# --- axiom checks -------------------------------------------------------------


@dataclass
class AxiomReport:
    anchor_homomorphism: bool
    jacobi: bool
    leibniz: bool
    witness: dict | None = None
    checked: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.anchor_homomorphism and self.jacobi and self.leibniz

    def __bool__(self):
        return self.ok


@dataclass
class WeightReport:
    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def _jacobiator(A, s1, s2, s3) -> Section:
    return (bracket_sections(A, s1, bracket_sections(A, s2, s3))
            + bracket_sections(A, s2, bracket_sections(A, s3, s1))
            + bracket_sections(A, s3, bracket_sections(A, s1, s2)))


def validate_presentation(A: AlgebroidPresentation, probes: int = 20, seed: int = 0,
                          leibniz_degree: int = 3) -> AxiomReport:
    """Check the anchor-homomorphism, Jacobi and Leibniz conditions.

    Jacobi is checked on every generator triple and then on ``probes`` random
    polynomial section triples.  The Leibniz check is probe based: the bracket
    is defined by the Leibniz rule, so it guards the implementation only.
    """
    bad = A.structure_is_antisymmetric()
    if bad is not None:
        i, j, k = bad
        raise MalformedPresentationError(
            f"structure table not antisymmetric at c[{A.names[i]}][{A.names[j]}][{A.names[k]}]")
    r = A.rank
    witness = None
    checked = {"anchor_pairs": 0, "jacobi_triples": 0, "jacobi_probes": 0, "leibniz_probes": 0}

    anchor_ok = True
    gens = [A.generator(i) for i in range(r)]
    fields_ = [anchor_field(g) for g in gens]
    for i in range(r):
        for j in range(i + 1, r):
            checked["anchor_pairs"] += 1
            lhs = anchor_field(bracket_sections(A, gens[i], gens[j]))
            rhs = field_bracket(fields_[i], fields_[j])
            if lhs != rhs:
                anchor_ok = False
                diff = tuple(str(a - b) for a, b in zip(lhs, rhs))
                witness = witness or {"axiom": "anchor", "generators": (A.names[i], A.names[j]),
                                      "defect": diff}
                break
        if not anchor_ok:
            break

    jacobi_ok = True
    for i in range(r):
        for j in range(i + 1, r):
            for k in range(j + 1, r):
                checked["jacobi_triples"] += 1
                jac = _jacobiator(A, gens[i], gens[j], gens[k])
                if not jac.is_zero():
                    jacobi_ok = False
                    if witness is None:
                        witness = {"axiom": "jacobi",
                                   "generators": (A.names[i], A.names[j], A.names[k]),
                                   "defect": tuple(str(c) for c in jac.coeffs)}
                    break
            if not jacobi_ok:
                break
        if not jacobi_ok:
            break
    if jacobi_ok and probes and r >= 2 and A.chart.nvars:
        rng = random.Random(seed)
        for _ in range(probes):
            ss = [A.section([random_poly(A.chart, rng, max_degree=2, nterms=2)
                             for _ in range(r)]) for _ in range(3)]
            checked["jacobi_probes"] += 1
            jac = _jacobiator(A, *ss)
            if not jac.is_zero():
                jacobi_ok = False
                if witness is None:
                    witness = {"axiom": "jacobi", "sections": tuple(repr(s) for s in ss),
                               "defect": tuple(str(c) for c in jac.coeffs)}
                break

    leibniz_ok = True
    for exp in monomials_up_to_degree(A.chart, leibniz_degree):
        f = Poly.monomial(A.chart, exp)
        for i in range(r):
            for j in range(r):
                checked["leibniz_probes"] += 1
                lhs = bracket_sections(A, gens[i], gens[j] * f)
                rhs = bracket_sections(A, gens[i], gens[j]) * f + gens[j] * A.anchor_apply(i, f)
                if lhs != rhs:
                    leibniz_ok = False
                    if witness is None:
                        witness = {"axiom": "leibniz", "generators": (A.names[i], A.names[j]),
                                   "probe": str(f)}
                    break
            if not leibniz_ok:
                break
        if not leibniz_ok:
            break

    return AxiomReport(anchor_ok, jacobi_ok, leibniz_ok, witness, checked)


def check_homogeneity(A: AlgebroidPresentation) -> WeightReport:
    """Do anchor and structure functions respect the weight grading?

    a(e_i) must have weight w_i, with d/dx_j carrying -weight(x_j), so
    anchor[i][j] has weight w_i + weight(x_j); c[i][j][k] must have weight
    w_i + w_j - w_k.  When this holds the differential preserves weight.
    """
    chart = A.chart
    for i in range(A.rank):
        for j, p in enumerate(A.anchor[i]):
            target = A.weights[i] + chart.weights[j]
            if not is_homogeneous(p, target):
                return WeightReport(False, {"entry": f"anchor[{A.names[i]}][{chart.variables[j]}]",
                                            "value": str(p), "expected_weight": target})
    for i in range(A.rank):
        for j in range(A.rank):
            for k, p in enumerate(A.structure[i][j]):
                target = A.weights[i] + A.weights[j] - A.weights[k]
                if not is_homogeneous(p, target):
                    return WeightReport(False, {
                        "entry": f"c[{A.names[i]}][{A.names[j]}][{A.names[k]}]",
                        "value": str(p), "expected_weight": target})
    return WeightReport(True)


def change_frame(A: AlgebroidPresentation, P, names=None) -> AlgebroidPresentation:
    """Re-present A in the constant frame g_a = sum_i P[i][a] e_i.

    ``P`` is an invertible square matrix of scalars.  Generators mixed by P
    must share a weight.
    """
    r = A.rank
    P = [[Scalar.coerce(x) for x in row] for row in P]
    if len(P) != r or any(len(row) != r for row in P):
        raise AlgebroidError(f"frame matrix must be {r}x{r}")
    Pinv = inverse(P)
    chart = A.chart
    zero = Poly.zero(chart)
    weights = []
    for a in range(r):
        ws = {A.weights[i] for i in range(r) if not P[i][a].is_zero()}
        if len(ws) != 1:
            raise AlgebroidError(f"frame vector {a} mixes generators of different weights")
        weights.append(ws.pop())
    anchor = []
    for a in range(r):
        row = [zero] * chart.nvars
        for i in range(r):
            if not P[i][a].is_zero():
                row = [x + A.anchor[i][v] * P[i][a] for v, x in enumerate(row)]
        anchor.append(row)
    table = [[[zero] * r for _ in range(r)] for _ in range(r)]
    for a in range(r):
        for b in range(r):
            if a == b:
                continue
            coeff = [zero] * r
            for i in range(r):
                if P[i][a].is_zero():
                    continue
                for j in range(r):
                    if P[j][b].is_zero():
                        continue
                    s = P[i][a] * P[j][b]
                    for k, c in A.bracket_terms(i, j):
                        coeff[k] = coeff[k] + c * s
            for c_ in range(r):
                acc = zero
                for k in range(r):
                    if coeff[k] and not Pinv[c_][k].is_zero():
                        acc = acc + coeff[k] * Pinv[c_][k]
                table[a][b][c_] = acc
    if names is None:
        names = [f"g{a + 1}" for a in range(r)]
    return AlgebroidPresentation(chart, names, weights, anchor, table)


def random_cochain(A: AlgebroidPresentation, degree: int, rng, value_rank=1, max_degree=2,
                   nterms=2, complex_coeffs=False) -> Cochain:
    terms = {}
    for I in subsets(A.rank, degree):
        if rng.random() < 0.7:
            terms[I] = tuple(random_poly(A.chart, rng, max_degree=max_degree, nterms=nterms,
                                         complex_coeffs=complex_coeffs)
                             for _ in range(value_rank))
    return Cochain(A, degree, terms, value_rank)


def constant_section_matrix(A: AlgebroidPresentation, matrix):
    """Apply a matrix of polynomials to generators: returns the sections
    M e_i = sum_k M[k][i] e_k."""
    return [A.section([matrix[k][i] for k in range(A.rank)]) for i in range(A.rank)]

