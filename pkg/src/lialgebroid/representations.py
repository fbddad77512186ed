"""Representations of an algebroid on a free module and the twisted
differential on Gamma(Lambda^p A^* (x) E^*)."""
from __future__ import annotations

from dataclasses import dataclass

from .algebroid import (
    AlgebroidError,
    AlgebroidPresentation,
    Cochain,
    PresentationMismatchError,
    WeightReport,
    as_poly,
    differential,
)
from .coefficients import Poly, is_homogeneous, monomials_up_to_degree
from .exterior import sort_sign, subsets


class Representation:
    """A flat A-connection on the free module with generators s_1..s_m.

    ``gammas[i][a][b]`` is the s_b coefficient of nabla_{e_i} s_a, and
    nabla_{e_i}(f s) = a(e_i)(f) s + f nabla_{e_i} s.
    """

    def __init__(self, source: AlgebroidPresentation, rank: int, gammas, weights=None,
                 names=None):
        self.source = source
        self.rank = rank
        r = source.rank
        chart = source.chart
        if len(gammas) != r or any(len(G) != rank or any(len(row) != rank for row in G)
                                   for G in gammas):
            raise AlgebroidError(f"need {r} connection matrices of size {rank}x{rank}")
        self.gammas = tuple(tuple(tuple(as_poly(chart, x) for x in row) for row in G)
                            for G in gammas)
        self.weights = tuple(weights) if weights is not None else (0,) * rank
        if len(self.weights) != rank:
            raise AlgebroidError("one weight per module generator required")
        self.names = tuple(names) if names is not None else tuple(f"s{a + 1}" for a in range(rank))

    def act(self, i: int, s):
        """nabla_{e_i} applied to a module section given as a vector of Poly."""
        A = self.source
        G = self.gammas[i]
        out = [A.anchor_apply(i, f) for f in s]
        for a, f in enumerate(s):
            if not f:
                continue
            for b, g in enumerate(G[a]):
                if g:
                    out[b] = out[b] + f * g
        return out

    def act_section(self, alpha, s):
        """nabla_alpha s for a section alpha of the source."""
        if alpha.presentation is not self.source:
            raise PresentationMismatchError("section is not on the source algebroid")
        zero = Poly.zero(self.source.chart)
        out = [zero] * self.rank
        for i, c in enumerate(alpha.coeffs):
            if c:
                out = [o + c * x for o, x in zip(out, self.act(i, s))]
        return out

    def __repr__(self):
        return f"Representation(source={self.source.names}, rank={self.rank})"


def trivial_representation(A: AlgebroidPresentation, rank: int = 1, weights=None) -> Representation:
    zero = Poly.zero(A.chart)
    return Representation(A, rank, [[[zero] * rank for _ in range(rank)] for _ in range(A.rank)],
                          weights)


def adjoint_representation(A: AlgebroidPresentation) -> Representation:
    """nabla_{e_i} e_a = {e_i, e_a}; only a representation when the anchor is zero."""
    if any(p for row in A.anchor for p in row):
        raise AlgebroidError("the adjoint action is a representation only for zero anchor")
    r = A.rank
    gammas = [[[A.structure[i][a][b] for b in range(r)] for a in range(r)] for i in range(r)]
    return Representation(A, r, gammas, A.weights, A.names)


def dual_representation(R: Representation) -> Representation:
    """nabla* on E^*: Gamma*_i = -Gamma_i^T."""
    m = R.rank
    gammas = [[[-G[b][a] for b in range(m)] for a in range(m)] for G in R.gammas]
    return Representation(R.source, m, gammas, tuple(-u for u in R.weights),
                          tuple(n + "*" for n in R.names))


def exterior_power(R: Representation, q: int) -> Representation:
    """Induced connection on Lambda^q E, basis s_K for K in colex order."""
    basis = subsets(R.rank, q)
    pos = {K: t for t, K in enumerate(basis)}
    chart = R.source.chart
    zero = Poly.zero(chart)
    size = len(basis)
    gammas = []
    for G in R.gammas:
        M = [[zero] * size for _ in range(size)]
        for t, K in enumerate(basis):
            for slot, k in enumerate(K):
                for l, g in enumerate(G[k]):
                    if not g:
                        continue
                    sign, S = sort_sign(K[:slot] + (l,) + K[slot + 1:])
                    if sign:
                        u = pos[S]
                        M[t][u] = M[t][u] + (g if sign > 0 else -g)
        gammas.append(M)
    weights = [sum(R.weights[k] for k in K) for K in basis]
    names = ["^".join(R.names[k] for k in K) or "1" for K in basis]
    return Representation(R.source, size, gammas, weights, names)


@dataclass
class RepresentationReport:
    ok: bool
    witness: dict | None = None
    checked: int = 0

    def __bool__(self):
        return self.ok


def validate_representation(R: Representation, probe_degree: int = 2) -> RepresentationReport:
    """Flatness nabla_{e_i,e_j} = [nabla_i, nabla_j] on the module generators
    and on monomial multiples of them.  The symbol condition holds by
    construction, since the first-order part of nabla_{e_i} is a(e_i)."""
    A = R.source
    chart = A.chart
    m = R.rank
    zero = Poly.zero(chart)
    probes = []
    for exp in monomials_up_to_degree(chart, probe_degree):
        f = Poly.monomial(chart, exp)
        for a in range(m):
            s = [zero] * m
            s[a] = f
            probes.append(s)
    checked = 0
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            bterms = A.bracket_terms(i, j)
            for s in probes:
                checked += 1
                lhs = [zero] * m
                for k, c in bterms:
                    lhs = [x + c * y for x, y in zip(lhs, R.act(k, s))]
                rhs = [x - y for x, y in zip(R.act(i, R.act(j, s)), R.act(j, R.act(i, s)))]
                if lhs != rhs:
                    return RepresentationReport(False, {
                        "generators": (A.names[i], A.names[j]),
                        "probe": tuple(str(x) for x in s),
                        "defect": tuple(str(x - y) for x, y in zip(lhs, rhs))}, checked)
    return RepresentationReport(True, None, checked)


def check_representation_homogeneity(R: Representation) -> WeightReport:
    """Gamma_i[a][b] must have weight w_i + u_a - u_b."""
    A = R.source
    for i, G in enumerate(R.gammas):
        for a, row in enumerate(G):
            for b, g in enumerate(row):
                target = A.weights[i] + R.weights[a] - R.weights[b]
                if not is_homogeneous(g, target):
                    return WeightReport(False, {"entry": f"gamma[{A.names[i]}][{a}][{b}]",
                                                "value": str(g), "expected_weight": target})
    return WeightReport(True)


def twisted_diff(R: Representation, xi: Cochain) -> Cochain:
    """delta_E on E^*-valued cochains:

    (d xi)(a_1..a_{p+1}, s) = sum_i (-1)^(i-1) [a(a_i) xi(..^a_i.., s) - xi(..^a_i.., nabla_{a_i} s)]
                            + sum_{i<j} (-1)^(i+j) xi({a_i, a_j}, ..^a_i..^a_j.., s)
    """
    if xi.presentation is not R.source:
        raise PresentationMismatchError("cochain is not on the representation's source")
    if xi.value_rank != R.rank:
        raise AlgebroidError(f"cochain value rank {xi.value_rank} != module rank {R.rank}")
    return differential(R.source, xi, R.gammas)
