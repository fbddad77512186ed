"""Matched pairs of algebroids, their bowtie sum, and the double complex
Lambda^p A1^* (x) Lambda^q A2^*.

The two differentials are assembled from twisted differentials:

* the A1 direction treats a (p, q) cochain as an A1 p-cochain with values
  in (Lambda^q A2)^*, twisted by the induced action of A1 on Lambda^q A2;
* the A2 direction treats it as an A2 q-cochain with values in
  (Lambda^p A1)^*.

With this identification the bare operators commute.  The slice stores the
A2-direction operator already multiplied by (-1)^p, so the stored pair
anticommutes and the total differential is their plain sum.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebroid import (
    AlgebroidError,
    AlgebroidPresentation,
    Cochain,
    PresentationMismatchError,
    Section,
    anchor_field,
    bracket_sections,
    check_homogeneity,
    differential,
    field_bracket,
)
from .coefficients import (
    Chart,
    Poly,
    is_antiholomorphic,
    is_holomorphic,
    random_poly,
)
from .exterior import subsets
from .homology import (
    ChainComplexSlice,
    CochainComplex,
    ComplexError,
    FilteredComplex,
    InhomogeneousError,
)
from .linalg import SparseMatrix, block_matrix
from .models import _coordinate_algebroid
from .representations import Representation, exterior_power


class AnticommutationError(ComplexError):
    def __init__(self, message, p=None, q=None, weight=None, witness=None):
        super().__init__(message)
        self.p = p
        self.q = q
        self.weight = weight
        self.witness = witness


class MatchedPairData:
    """Two algebroids on one chart with mutual actions.

    ``rep12`` is the action of A1 on the generators of A2 and ``rep21`` the
    action of A2 on the generators of A1.  Module weights are taken from the
    generator weights of the algebroid being acted on.
    """

    def __init__(self, a1: AlgebroidPresentation, a2: AlgebroidPresentation,
                 rep12: Representation, rep21: Representation):
        if a1.chart != a2.chart:
            raise PresentationMismatchError("matched algebroids must live on the same chart")
        if rep12.source is not a1 or rep12.rank != a2.rank:
            raise AlgebroidError("rep12 must be an action of A1 on the generators of A2")
        if rep21.source is not a2 or rep21.rank != a1.rank:
            raise AlgebroidError("rep21 must be an action of A2 on the generators of A1")
        self.a1 = a1
        self.a2 = a2
        self.rep12 = Representation(a1, a2.rank, rep12.gammas, a2.weights, a2.names)
        self.rep21 = Representation(a2, a1.rank, rep21.gammas, a1.weights, a1.names)

    @property
    def chart(self) -> Chart:
        return self.a1.chart

    def nabla12(self, alpha: Section, beta: Section) -> Section:
        """nabla_alpha beta for alpha in A1, beta in A2."""
        return self.a2.section(self.rep12.act_section(alpha, beta.coeffs))

    def nabla21(self, beta: Section, alpha: Section) -> Section:
        """nabla_beta alpha for beta in A2, alpha in A1."""
        return self.a1.section(self.rep21.act_section(beta, alpha.coeffs))

    def cochain_complex(self, max_degree=None):
        return CochainComplex(bowtie(self, check=False), max_degree=max_degree)

    def __repr__(self):
        return f"MatchedPairData(a1={self.a1.names}, a2={self.a2.names})"


@dataclass
class MatchedReport:
    ok: bool
    condition: str | None = None
    witness: dict | None = None
    checked: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _field_sum(X, Y, sign=1):
    return tuple(a + b if sign > 0 else a - b for a, b in zip(X, Y))


def _first_condition(M, alpha, beta):
    """[a(alpha), b(beta)] + a(nabla_beta alpha) - b(nabla_alpha beta)."""
    lhs = field_bracket(anchor_field(alpha), anchor_field(beta))
    rhs = _field_sum(anchor_field(M.nabla12(alpha, beta)),
                     anchor_field(M.nabla21(beta, alpha)), -1)
    return _field_sum(lhs, rhs, -1)


def _second_condition(M, alpha, b1, b2):
    A2 = M.a2
    lhs = M.nabla12(alpha, bracket_sections(A2, b1, b2))
    rhs = (bracket_sections(A2, M.nabla12(alpha, b1), b2)
           + bracket_sections(A2, b1, M.nabla12(alpha, b2))
           + M.nabla12(M.nabla21(b2, alpha), b1)
           - M.nabla12(M.nabla21(b1, alpha), b2))
    return lhs - rhs


def _third_condition(M, beta, a1, a2):
    A1 = M.a1
    lhs = M.nabla21(beta, bracket_sections(A1, a1, a2))
    rhs = (bracket_sections(A1, M.nabla21(beta, a1), a2)
           + bracket_sections(A1, a1, M.nabla21(beta, a2))
           + M.nabla21(M.nabla12(a2, beta), a1)
           - M.nabla21(M.nabla12(a1, beta), a2))
    return lhs - rhs


def check_matched(M: MatchedPairData, probes: int = 10, seed: int = 0) -> MatchedReport:
    """Check the three matching conditions.

    The anchor condition is checked on generator pairs, the two bracket
    conditions on generator triples, and all three on ``probes`` random
    polynomial section triples.  The first failure is reported.
    """
    A1, A2 = M.a1, M.a2
    g1 = [A1.generator(i) for i in range(A1.rank)]
    g2 = [A2.generator(k) for k in range(A2.rank)]
    checked = {"anchor": 0, "second": 0, "third": 0, "probes": 0}

    def fail(cond, defect, **where):
        where["defect"] = tuple(str(c) for c in defect)
        return MatchedReport(False, cond, where, checked)

    for i, a in enumerate(g1):
        for k, b in enumerate(g2):
            checked["anchor"] += 1
            d = _first_condition(M, a, b)
            if any(d):
                return fail("anchor", d, generators=(A1.names[i], A2.names[k]))
    for i, a in enumerate(g1):
        for k in range(A2.rank):
            for l in range(k + 1, A2.rank):
                checked["second"] += 1
                d = _second_condition(M, a, g2[k], g2[l])
                if not d.is_zero():
                    return fail("second", d.coeffs,
                                generators=(A1.names[i], A2.names[k], A2.names[l]))
    for k, b in enumerate(g2):
        for i in range(A1.rank):
            for j in range(i + 1, A1.rank):
                checked["third"] += 1
                d = _third_condition(M, b, g1[i], g1[j])
                if not d.is_zero():
                    return fail("third", d.coeffs,
                                generators=(A2.names[k], A1.names[i], A1.names[j]))

    chart = M.chart
    if chart.nvars:
        rng = random.Random(seed)

        def rsec(A):
            return A.section([random_poly(chart, rng, max_degree=2, nterms=2)
                              for _ in range(A.rank)])

        for _ in range(probes):
            checked["probes"] += 1
            a, a_ = rsec(A1), rsec(A1)
            b, b_ = rsec(A2), rsec(A2)
            d = _first_condition(M, a, b)
            if any(d):
                return fail("anchor", d, sections=(repr(a), repr(b)))
            d = _second_condition(M, a, b, b_)
            if not d.is_zero():
                return fail("second", d.coeffs, sections=(repr(a), repr(b), repr(b_)))
            d = _third_condition(M, b, a, a_)
            if not d.is_zero():
                return fail("third", d.coeffs, sections=(repr(b), repr(a), repr(a_)))
    return MatchedReport(True, None, None, checked)


@dataclass
class HolomorphyReport:
    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def check_skew_holomorphic(M: MatchedPairData) -> HolomorphyReport:
    """Syntactic chart-level shadow of skew-holomorphy: the structure data
    of A1 is free of antiholomorphic variables and that of A2 is free of
    holomorphic ones."""
    if not M.chart.has_conjugation():
        return HolomorphyReport(False, {"reason": "chart has no conjugation pairing"})
    for label, A, test in (("a1", M.a1, is_holomorphic), ("a2", M.a2, is_antiholomorphic)):
        for i, row in enumerate(A.anchor):
            for j, p in enumerate(row):
                if not test(p):
                    return HolomorphyReport(False, {
                        "entry": f"{label}.anchor[{A.names[i]}][{A.chart.variables[j]}]",
                        "value": str(p)})
        for i in range(A.rank):
            for j in range(A.rank):
                for k, p in A.bracket_terms(i, j):
                    if not test(p):
                        return HolomorphyReport(False, {
                            "entry": f"{label}.c[{A.names[i]}][{A.names[j]}][{A.names[k]}]",
                            "value": str(p)})
    return HolomorphyReport(True)


def bowtie(M: MatchedPairData, check: bool = True, names=None) -> AlgebroidPresentation:
    """The algebroid A1 + A2 with anchor a + b and the bracket

        {e_i, f_k} = -nabla_{f_k} e_i + nabla_{e_i} f_k.
    """
    if check:
        rep = check_matched(M)
        if not rep:
            raise AlgebroidError(f"not a matched pair: {rep.condition} condition fails, "
                                 f"{rep.witness}")
    A1, A2 = M.a1, M.a2
    r1, r2 = A1.rank, A2.rank
    r = r1 + r2
    chart = M.chart
    zero = Poly.zero(chart)
    table = [[[zero] * r for _ in range(r)] for _ in range(r)]
    for i in range(r1):
        for j in range(r1):
            for k, c in A1.bracket_terms(i, j):
                table[i][j][k] = c
    for i in range(r2):
        for j in range(r2):
            for k, c in A2.bracket_terms(i, j):
                table[r1 + i][r1 + j][r1 + k] = c
    for i in range(r1):
        for k in range(r2):
            vec = [zero] * r
            for m, g in enumerate(M.rep21.gammas[k][i]):
                vec[m] = vec[m] - g
            for l, g in enumerate(M.rep12.gammas[i][k]):
                vec[r1 + l] = vec[r1 + l] + g
            table[i][r1 + k] = vec
            table[r1 + k][i] = [-x for x in vec]
    if names is None:
        names = list(A1.names) + list(A2.names)
        if len(set(names)) != r:
            names = [f"{n}_1" for n in A1.names] + [f"{n}_2" for n in A2.names]
    anchor = list(A1.anchor) + list(A2.anchor)
    return AlgebroidPresentation(chart, names, A1.weights + A2.weights, anchor, table)


# --- the double complex -------------------------------------------------------


@dataclass
class DoubleComplexSlice:
    """Bases of lambda^{p,q} at one weight, with the A1-direction operator
    ``partial[(p, q)]`` and the sign-dressed A2-direction operator
    ``partial_bar[(p, q)]`` (which already carries the factor (-1)^p)."""

    weight: int
    ranks: tuple
    bases: dict
    partial: dict
    partial_bar: dict

    @property
    def bidegrees(self):
        return sorted(self.bases)

    def dim(self, p, q) -> int:
        return len(self.bases.get((p, q), ()))

    def _zero(self, src, tgt):
        return SparseMatrix(self.dim(*tgt), self.dim(*src))

    def d(self, p, q) -> SparseMatrix:
        m = self.partial.get((p, q))
        return self._zero((p, q), (p + 1, q)) if m is None else m

    def dbar(self, p, q) -> SparseMatrix:
        m = self.partial_bar.get((p, q))
        return self._zero((p, q), (p, q + 1)) if m is None else m

    def check(self):
        """Raise unless d^2 = 0, dbar^2 = 0 and d dbar + dbar d = 0."""
        r1, r2 = self.ranks
        w = self.weight
        for (p, q) in self.bidegrees:
            if p + 2 <= r1 and not (self.d(p + 1, q) @ self.d(p, q)).is_zero():
                raise ComplexError(f"partial^2 != 0 at (p,q,w)=({p},{q},{w})")
            if q + 2 <= r2 and not (self.dbar(p, q + 1) @ self.dbar(p, q)).is_zero():
                raise ComplexError(f"dbar^2 != 0 at (p,q,w)=({p},{q},{w})")
            if p + 1 <= r1 and q + 1 <= r2:
                anti = self.dbar(p + 1, q) @ self.d(p, q) + self.d(p, q + 1) @ self.dbar(p, q)
                if not anti.is_zero():
                    (i, j), v = min(anti.entries.items())
                    raise AnticommutationError(
                        f"partial and dbar do not anticommute at (p,q,w)=({p},{q},{w})",
                        p, q, w, {"source": self.bases[(p, q)][j],
                                  "target": self.bases[(p + 1, q + 1)][i], "value": str(v)})

    def _total_layout(self):
        r1, r2 = self.ranks
        layout = {}
        for k in range(r1 + r2 + 1):
            layout[k] = [(p, k - p) for p in range(max(0, k - r2), min(k, r1) + 1)]
        return layout

    def total(self) -> ChainComplexSlice:
        """Total complex, degree k = p + q, D = partial + dressed dbar."""
        layout = self._total_layout()
        bases = {k: [(p, q, lbl) for (p, q) in blocks for lbl in self.bases[(p, q)]]
                 for k, blocks in layout.items()}
        matrices = {}
        for k in range(len(layout) - 1):
            src, tgt = layout[k], layout[k + 1]
            tpos = {pq: t for t, pq in enumerate(tgt)}
            blocks = {}
            for s, (p, q) in enumerate(src):
                if (p + 1, q) in tpos:
                    blocks[(tpos[(p + 1, q)], s)] = self.d(p, q)
                if (p, q + 1) in tpos:
                    blocks[(tpos[(p, q + 1)], s)] = self.dbar(p, q)
            matrices[k] = block_matrix([self.dim(*pq) for pq in tgt],
                                       [self.dim(*pq) for pq in src], blocks)
        return ChainComplexSlice(self.weight, bases, matrices)

    def filtered_total(self) -> FilteredComplex:
        """Total complex filtered by the A1-degree p (columns)."""
        tot = self.total()
        filt = {k: [p for (p, _, _) in tot.bases[k]] for k in tot.degrees}
        return FilteredComplex(tot, filt)


def double_complex(M: MatchedPairData, w: int, check: bool = True) -> DoubleComplexSlice:
    """Assemble the weight-w slice of lambda^{p,q} with both differentials.

    With ``check=True`` (default) the matching conditions are not re-derived
    symbolically; instead the matrix identities d^2 = dbar^2 = 0 and
    d dbar + dbar d = 0 are verified and a failure raises
    :class:`AnticommutationError` naming (p, q, w).
    """
    A1, A2 = M.a1, M.a2
    for A in (A1, A2):
        rep = check_homogeneity(A)
        if not rep:
            raise InhomogeneousError(f"inhomogeneous data: {rep.witness}")
    r1, r2 = A1.rank, A2.rank
    cx1 = {q: CochainComplex(A1, exterior_power(M.rep12, q)) for q in range(r2 + 1)}
    cx2 = {p: CochainComplex(A2, exterior_power(M.rep21, p)) for p in range(r1 + 1)}
    for cx in list(cx1.values()) + list(cx2.values()):
        cx.ensure_homogeneous()
    K2 = {q: subsets(r2, q) for q in range(r2 + 1)}
    K1 = {p: subsets(r1, p) for p in range(r1 + 1)}

    bases = {}
    for p in range(r1 + 1):
        for q in range(r2 + 1):
            bases[(p, q)] = [(I, K2[q][a], exp) for (I, a, exp) in cx1[q].basis(p, w)]

    partial = {}
    for q in range(r2 + 1):
        for p in range(r1):
            partial[(p, q)] = cx1[q].differential_matrix(p, w)[0]

    partial_bar = {}
    for p in range(r1 + 1):
        for q in range(r2):
            m, src2, tgt2 = cx2[p].differential_matrix(q, w)
            # permute the A2-ordered labels (K, b, exp) into the (I, K, exp) order
            spos = {lbl: t for t, lbl in enumerate(bases[(p, q)])}
            tpos = {lbl: t for t, lbl in enumerate(bases[(p, q + 1)])}
            smap = [spos[(K1[p][b], K, exp)] for (K, b, exp) in src2]
            tmap = [tpos[(K1[p][b], K, exp)] for (K, b, exp) in tgt2]
            sign = -1 if p % 2 else 1
            out = SparseMatrix(len(tpos), len(spos))
            out.entries = {(tmap[i], smap[j]): (v if sign > 0 else -v)
                           for (i, j), v in m.entries.items()}
            partial_bar[(p, q)] = out
    dc = DoubleComplexSlice(w, (r1, r2), bases, partial, partial_bar)
    if check:
        dc.check()
    return dc


def total_complex(slice_: DoubleComplexSlice) -> ChainComplexSlice:
    return slice_.total()


# --- bigraded cochains and the bare operators ---------------------------------


class BiCochain:
    """An element of lambda^{p,q}: ``terms[(I, K)]`` is the coefficient of
    e^I (x) f^K."""

    def __init__(self, pair: MatchedPairData, p: int, q: int, terms=None):
        self.pair = pair
        self.p = p
        self.q = q
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __eq__(self, other):
        if not isinstance(other, BiCochain):
            return NotImplemented
        return (self.pair is other.pair and (self.p, self.q) == (other.p, other.q)
                and self.terms == other.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return BiCochain(self.pair, self.p, self.q, out)

    def __neg__(self):
        return BiCochain(self.pair, self.p, self.q, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        body = ", ".join(f"{I}x{K}: {v}" for (I, K), v in sorted(self.terms.items()))
        return f"BiCochain(({self.p},{self.q}), {{{body}}})"


def decomposable(M: MatchedPairData, mu: Cochain, nu: Cochain) -> BiCochain:
    """mu (x) nu for scalar cochains mu on A1 and nu on A2."""
    if mu.presentation is not M.a1 or nu.presentation is not M.a2:
        raise PresentationMismatchError("mu must live on A1 and nu on A2")
    terms = {}
    for I, (f,) in mu.terms.items():
        for K, (g,) in nu.terms.items():
            terms[(I, K)] = f * g
    return BiCochain(M, mu.degree, nu.degree, terms)


def partial_1(x: BiCochain) -> BiCochain:
    """Bare A1-direction operator lambda^{p,q} -> lambda^{p+1,q}."""
    M = x.pair
    Ks = subsets(M.a2.rank, x.q)
    R = exterior_power(M.rep12, x.q)
    zero = Poly.zero(M.chart)
    terms = {}
    for (I, K), f in x.terms.items():
        vec = terms.setdefault(I, [zero] * len(Ks))
        vec[Ks.index(K)] = f
    xi = Cochain(M.a1, x.p, {I: tuple(v) for I, v in terms.items()}, len(Ks))
    d = differential(M.a1, xi, R.gammas)
    return BiCochain(M, x.p + 1, x.q, {(I, Ks[a]): f for I, v in d.terms.items()
                                       for a, f in enumerate(v) if f})


def partial_2(x: BiCochain) -> BiCochain:
    """Bare A2-direction operator lambda^{p,q} -> lambda^{p,q+1}."""
    M = x.pair
    Is = subsets(M.a1.rank, x.p)
    R = exterior_power(M.rep21, x.p)
    zero = Poly.zero(M.chart)
    terms = {}
    for (I, K), f in x.terms.items():
        vec = terms.setdefault(K, [zero] * len(Is))
        vec[Is.index(I)] = f
    xi = Cochain(M.a2, x.q, {K: tuple(v) for K, v in terms.items()}, len(Is))
    d = differential(M.a2, xi, R.gammas)
    return BiCochain(M, x.p, x.q + 1, {(Is[b], K): f for K, v in d.terms.items()
                                       for b, f in enumerate(v) if f})


# --- fixtures -----------------------------------------------------------------


def zero_actions(a1: AlgebroidPresentation, a2: AlgebroidPresentation) -> MatchedPairData:
    """Pair with both cross actions zero on the frames."""
    if a1.chart != a2.chart:
        raise PresentationMismatchError("matched algebroids must live on the same chart")
    z = Poly.zero(a1.chart)
    rep12 = Representation(a1, a2.rank, [[[z] * a2.rank for _ in range(a2.rank)]
                                         for _ in range(a1.rank)])
    rep21 = Representation(a2, a1.rank, [[[z] * a1.rank for _ in range(a1.rank)]
                                         for _ in range(a2.rank)])
    return MatchedPairData(a1, a2, rep12, rep21)


def dolbeault_chart(n: int) -> Chart:
    if n < 1:
        raise AlgebroidError("need at least one complex variable")
    hol = ("z", "w")[:n] if n <= 2 else tuple(f"z{k + 1}" for k in range(n))
    anti = tuple(v + "b" for v in hol)
    return Chart(hol + anti, pairs=tuple(zip(hol, anti)))


def dolbeault_pair(n: int) -> MatchedPairData:
    """A1 = span of d/dz_k, A2 = span of d/dzb_k, zero cross actions."""
    chart = dolbeault_chart(n)
    hol = [chart.variables[k] for k in chart.holomorphic_indices()]
    anti = [chart.variables[k] for k in chart.antiholomorphic_indices()]
    return zero_actions(_coordinate_algebroid(chart, hol), _coordinate_algebroid(chart, anti))


def broken_dolbeault_pair(n: int = 1) -> MatchedPairData:
    """Dolbeault pair with nabla_{d/dz} d/dzb = zb d/dzb; fails the anchor condition."""
    M = dolbeault_pair(n)
    chart = M.chart
    gam = [[list(row) for row in G] for G in M.rep12.gammas]
    gam[0][0][0] = chart.var(chart.variables[chart.antiholomorphic_indices()[0]])
    return MatchedPairData(M.a1, M.a2, Representation(M.a1, M.a2.rank, gam), M.rep21)


def broken_point_pair() -> MatchedPairData:
    """Point algebras A1 = <e>, A2 = <f1, f2> (both abelian) with
    nabla_e = identity on A2, nabla_{f1} e = e, nabla_{f2} e = 0.  Each
    action is flat but the second matching condition fails."""
    from .models import lie_algebra_point
    a1 = lie_algebra_point({}, names=["e"])
    a2 = lie_algebra_point({}, names=["f1", "f2"])
    chart = a1.chart
    one, zero = Poly.constant(chart, 1), Poly.zero(chart)
    rep12 = Representation(a1, 2, [[[one, zero], [zero, one]]])
    rep21 = Representation(a2, 1, [[[one]], [[zero]]])
    return MatchedPairData(a1, a2, rep12, rep21)
