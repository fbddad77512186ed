import random

import pytest
import sympy as sp

from lialgebroid.algebroid import AlgebroidError, Cochain, change_frame, validate_presentation
from lialgebroid.coefficients import Chart, Poly
from lialgebroid.homology import CochainComplex, betti, betti_range, degree_zero_kernel
from lialgebroid.matched import bowtie, check_matched, decomposable, dolbeault_chart, partial_1, partial_2
from lialgebroid.models import _coordinate_algebroid
from lialgebroid.poisson import (
    LichnerowiczComplex,
    Multivector,
    NotPoissonError,
    PoissonBivector,
    bihamiltonian_check,
    bivector,
    cotangent_algebroid,
    jacobi_check,
    lichnerowicz_diff,
    random_multivector,
    schouten,
    skew_pair,
    so3_bivector,
    tangential_poisson_algebroid,
    vector_field,
)
from oracles import jacobiators, koszul_structure, poisson_bracket, symbols, to_sympy

XYZ = Chart(("x", "y", "z"))
P_GOOD = bivector(XYZ, {("x", "y"): 1, ("x", "z"): "y"})
Q_BAD = bivector(XYZ, {("x", "y"): 1, ("y", "z"): "y"})


def _sym_field(X):
    return [to_sympy(X.coefficient((k,))) for k in range(X.chart.nvars)]


# --- the Schouten bracket ------------------------------------------------------------------


def test_schouten_examples():
    ch = Chart(("x", "y"))
    dx = vector_field(ch, {"x": 1})
    assert schouten(dx, vector_field(ch, {"y": "x"})) == vector_field(ch, {"y": 1})
    f = Multivector.function(ch.parse("x^2*y"))
    assert schouten(dx, f) == Multivector.function(ch.parse("2*x*y"))
    assert schouten(f, f).is_zero() and schouten(f, f).degree == 0


def test_schouten_of_vector_fields_is_the_lie_bracket():
    rng = random.Random(1)
    xs = symbols(XYZ)
    for _ in range(15):
        X, Y = (random_multivector(XYZ, 1, rng) for _ in range(2))
        a, b = _sym_field(X), _sym_field(Y)
        expected = [sp.expand(sum(a[i] * sp.diff(b[k], xs[i]) - b[i] * sp.diff(a[k], xs[i])
                                  for i in range(3))) for k in range(3)]
        assert [sp.expand(c) for c in _sym_field(schouten(X, Y))] == expected


def test_schouten_graded_antisymmetry_and_jacobi():
    rng = random.Random(2)
    for _ in range(12):
        # positive degrees keep every intermediate bracket in degree >= 0
        a, b, c = (rng.randint(1, 3) for _ in range(3))
        u = random_multivector(XYZ, a, rng)
        v = random_multivector(XYZ, b, rng)
        w = random_multivector(XYZ, c, rng)
        s_uv = (a - 1) * (b - 1) % 2
        uv, vu = schouten(u, v), schouten(v, u)
        assert uv == (vu if s_uv else -vu)
        lhs = schouten(u, schouten(v, w))
        rhs = schouten(schouten(u, v), w)
        second = schouten(v, schouten(u, w))
        rhs = rhs - second if s_uv else rhs + second
        assert lhs == rhs


# --- Jacobi ----------------------------------------------------------------------------------


def test_jacobi_verdicts():
    assert jacobi_check(P_GOOD).ok and jacobi_check(so3_bivector()).ok
    rep = jacobi_check(Q_BAD)
    assert not rep.ok
    assert rep.witness == Multivector(XYZ, 3, {("x", "y", "z"): 2})


def test_schouten_square_is_twice_the_jacobiator():
    rng = random.Random(3)
    ch = Chart(("x", "y", "z", "t"))
    for P in [P_GOOD, Q_BAD, so3_bivector()] + [
            PoissonBivector.of(random_multivector(ch, 2, rng)) for _ in range(8)]:
        t = schouten(P, P)
        for (i, j, k), jac in jacobiators(P).items():
            assert sp.expand(to_sympy(t.coefficient((i, j, k))) - 2 * jac) == 0
        assert jacobi_check(P).ok == all(v == 0 for v in jacobiators(P).values())


def test_lichnerowicz_square():
    ch = Chart(("x", "y"))
    P = bivector(ch, {("x", "y"): 1})
    assert lichnerowicz_diff(P, Multivector.function(ch.var("x"))) == vector_field(ch, {"y": -1})
    rng = random.Random(4)
    for _ in range(10):
        u = random_multivector(XYZ, rng.randint(0, 2), rng)
        assert lichnerowicz_diff(P_GOOD, lichnerowicz_diff(P_GOOD, u)).is_zero()
    f = Multivector.function(XYZ.var("x"))
    assert not lichnerowicz_diff(Q_BAD, lichnerowicz_diff(Q_BAD, f)).is_zero()


def test_bracket_matches_oracle():
    P = so3_bivector()
    rng = random.Random(5)
    from lialgebroid.coefficients import random_poly

    for _ in range(10):
        f, g = random_poly(P.chart, rng, max_degree=2), random_poly(P.chart, rng, max_degree=2)
        assert sp.expand(to_sympy(P.poisson_bracket(f, g))
                         - poisson_bracket(P, to_sympy(f), to_sympy(g))) == 0


# --- cotangent algebroids ----------------------------------------------------------------------


def test_cotangent_of_symplectic_plane():
    ch = Chart(("x", "y"))
    A = cotangent_algebroid(bivector(ch, {("x", "y"): 1}))
    zero, one = Poly.zero(ch), Poly.constant(ch, 1)
    assert A.names == ("dx", "dy")
    assert [list(r) for r in A.anchor] == [[zero, one], [-one, zero]]


def test_so3_koszul_bracket_matches_oracle():
    P = so3_bivector()
    A = cotangent_algebroid(P)
    expected = koszul_structure(P)
    for i in range(3):
        for j in range(3):
            assert [to_sympy(c) for c in A.structure[i][j]] == expected[i][j]
    assert validate_presentation(A).ok


def test_non_poisson_cotangent_rejected():
    with pytest.raises(NotPoissonError):
        cotangent_algebroid(Q_BAD)


def test_lichnerowicz_matrices_equal_cotangent_cochain_matrices():
    P = so3_bivector()
    L = LichnerowiczComplex(P)
    cx = CochainComplex(cotangent_algebroid(P))
    for w in range(-1, 4):
        lsl, csl = L.slice(w), cx.slice(w)
        for k in range(3):
            assert lsl.matrix(k).entries == csl.matrix(k).entries
            assert lsl.bases[k] == csl.bases[k]


def test_so3_cohomology_and_casimir():
    P = so3_bivector()
    A = cotangent_algebroid(P)
    by_w = {t.weight: t.numbers for t in betti_range(A, range(0, 3))}
    assert by_w[0] == (1, 0, 0, 1) and by_w[2] == (1, 0, 0, 1)
    (c,) = degree_zero_kernel(A, 2)
    f = c.coefficient(())
    x, y, z = symbols(P.chart)
    assert sp.simplify(to_sympy(f) / (x**2 + y**2 + z**2)).is_number


def test_symplectic_lichnerowicz_is_de_rham():
    ch = Chart(("x", "y"))
    P = bivector(ch, {("x", "y"): 1})
    L = LichnerowiczComplex(P)
    totals = [betti(L.slice(w)).numbers for w in range(-4, 5)]
    nonzero = [t for t in totals if any(t)]
    assert nonzero == [(1, 0, 0)]


# --- skew pairs ----------------------------------------------------------------------------------


def _pair_bivectors():
    ch = dolbeault_chart(2)
    return [bivector(ch, {("z", "w"): c}) for c in ("1", "z", "w", "z + 2*w", "i*z")]


@pytest.mark.parametrize("k", range(5))
def test_skew_pairs_are_matched_and_holomorphic(k):
    P = _pair_bivectors()[k]
    for P2 in (_pair_bivectors()[0], P):
        M = skew_pair(P, P2)
        assert check_matched(M).ok
        assert validate_presentation(bowtie(M)).ok


@pytest.mark.parametrize("k", [0, 1, 4])
def test_skew_operators_on_decomposables(k):
    P = _pair_bivectors()[k]
    M = skew_pair(P, P)
    ch = M.chart
    for mu_s, nu_s in (("z", "wb"), ("z*w", "zb^2"), ("w^2", "zb*wb")):
        mu = Cochain.function(M.a1, ch.parse(mu_s))
        nu = Cochain.function(M.a2, ch.parse(nu_s))
        from lialgebroid.algebroid import cochain_diff

        x = decomposable(M, mu, nu)
        target = decomposable(M, cochain_diff(M.a1, mu), cochain_diff(M.a2, nu))
        assert partial_1(partial_2(x)) == target == partial_2(partial_1(x))


def test_nondegenerate_second_side_is_antiholomorphic_tangent():
    P = _pair_bivectors()[0]
    M = skew_pair(P, P)
    B = change_frame(M.a2, [[0, 1], [-1, 0]])
    T01 = _coordinate_algebroid(M.chart, ["zb", "wb"])
    assert B.anchor == T01.anchor and B.structure == T01.structure


def test_tangential_split_pair():
    ch = dolbeault_chart(3)
    P = bivector(ch, {("z1", "z2"): 1})
    A = tangential_poisson_algebroid(P, ["z1", "z2", "z3"])
    assert A.names == ("dz1", "dz2")
    M = skew_pair(P, P, tangential=True)
    assert (M.a1.rank, M.a2.rank) == (2, 2) and check_matched(M).ok
    with pytest.raises(AlgebroidError):
        # kernel spanned by dz2 - dz3, not by coordinate differentials
        tangential_poisson_algebroid(bivector(ch, {("z1", "z2"): 1, ("z1", "z3"): 1}))


def test_skew_pair_rejects_non_holomorphic():
    ch = dolbeault_chart(2)
    with pytest.raises(AlgebroidError):
        skew_pair(bivector(ch, {("z", "w"): "zb"}), _pair_bivectors()[0])


def test_bihamiltonian():
    ch = dolbeault_chart(2)
    P1 = bivector(ch, {("z", "w"): 1})
    P2 = bivector(ch, {("z", "w"): "z"})
    assert bihamiltonian_check(P1, P2).ok
    rep = bihamiltonian_check(bivector(ch, {("z", "zb"): 1}), P2)
    assert not rep.ok and rep.witness.degree == 3
    assert rep.witness == schouten(bivector(ch, {("z", "zb"): 1}),
                                   bivector(ch, {("zb", "wb"): "zb"}))
