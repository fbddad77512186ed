import itertools
import random
import zlib

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lialgebroid.algebroid import (
    AlgebroidPresentation,
    Cochain,
    MalformedPresentationError,
    PresentationMismatchError,
    bracket_sections,
    change_frame,
    check_homogeneity,
    cochain_diff,
    cochain_weight,
    evaluate,
    random_cochain,
    validate_presentation,
    wedge,
)
from lialgebroid.coefficients import Chart, Poly
from lialgebroid.models import sl2, tangent_algebroid
from lialgebroid.poisson import cotangent_algebroid, so3_bivector
from fixtures import validated_algebroids
from oracles import cartan_differential, perm_sign, same_cochain

FIXTURES = validated_algebroids()


def _sl2_variant(ef):
    return AlgebroidPresentation.from_brackets(
        Chart(()), ["h", "e", "f"],
        brackets={("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): ef})


# --- validation ------------------------------------------------------------------


def test_tangent_and_sl2_validate():
    assert validate_presentation(tangent_algebroid(2)).ok
    assert validate_presentation(tangent_algebroid(3)).ok
    assert validate_presentation(sl2()).ok


def test_rescaled_ef_bracket_still_satisfies_jacobi():
    # [e,f] = c h keeps Jacobi for every c: [e,[f,h]] = 2c h cancels [f,[h,e]] = -2c h
    rep = validate_presentation(_sl2_variant({"h": 2}))
    assert rep.ok


def test_mutated_sl2_fails_jacobi_with_witness():
    # [e,f] = h + e: [h,[e,f]] + [e,[f,h]] + [f,[h,e]] = 2e
    rep = validate_presentation(_sl2_variant({"h": 1, "e": 1}))
    assert not rep.jacobi and rep.anchor_homomorphism
    assert rep.witness["generators"] == ("h", "e", "f")
    assert rep.witness["defect"] == ("0", "2", "0")


def test_anchor_homomorphism_failure():
    ch = Chart(("x",))
    # a(e1) = d_x, a(e2) = x d_x but {e1, e2} = 0
    A = AlgebroidPresentation.from_brackets(ch, ["e1", "e2"], {"e1": {"x": 1}, "e2": {"x": "x"}})
    rep = validate_presentation(A)
    assert not rep.anchor_homomorphism
    assert rep.witness["axiom"] == "anchor"


def test_asymmetric_table_is_rejected():
    ch = Chart(())
    one = Poly.constant(ch, 1)
    zero = Poly.zero(ch)
    table = [[[zero, zero], [one, zero]], [[one, zero], [zero, zero]]]
    A = AlgebroidPresentation(ch, ["a", "b"], [0, 0], [[], []], table)
    with pytest.raises(MalformedPresentationError):
        validate_presentation(A)


def test_every_fixture_validates_and_is_homogeneous():
    assert len(FIXTURES) > 10
    for name, A in FIXTURES.items():
        assert check_homogeneity(A).ok, name


# --- homogeneity ---------------------------------------------------------------------


def test_homogeneity_examples():
    assert check_homogeneity(tangent_algebroid(2)).ok
    assert check_homogeneity(cotangent_algebroid(so3_bivector())).ok
    ch = Chart(("x",))
    A = AlgebroidPresentation.from_brackets(ch, ["e"], {"e": {"x": "x^2 + x"}}, weights=[-1])
    rep = check_homogeneity(A)
    assert not rep.ok and rep.witness["entry"] == "anchor[e][x]"


# --- brackets of sections ------------------------------------------------------------


def test_bracket_examples():
    T = tangent_algebroid(2)
    x = T.chart.var("x")
    dx, dy = T.generator(0), T.generator(1)
    assert bracket_sections(T, dx, dy * x) == dy
    ch = Chart(("x",))
    A = AlgebroidPresentation.from_brackets(
        ch, ["h", "e", "f"], brackets={("h", "e"): {"e": 2}, ("h", "f"): {"f": -2},
                                       ("e", "f"): {"h": 1}})
    x = ch.var("x")
    assert bracket_sections(A, A.generator(0), A.generator(1) * x) == A.generator(1) * (x * 2)


def test_bracket_presentation_mismatch():
    with pytest.raises(PresentationMismatchError):
        bracket_sections(sl2(), sl2().generator(0), tangent_algebroid(1).generator(0))


@pytest.mark.parametrize("name", ["tangent3", "cotangent(so3)", "bowtie(skew z dz^dw)"])
def test_bracket_antisymmetric_and_leibniz(name):
    A = FIXTURES[name]
    rng = random.Random(11)
    from lialgebroid.coefficients import random_poly

    for _ in range(10):
        s = A.section([random_poly(A.chart, rng, max_degree=2) for _ in range(A.rank)])
        t = A.section([random_poly(A.chart, rng, max_degree=2) for _ in range(A.rank)])
        f = random_poly(A.chart, rng, max_degree=2)
        assert bracket_sections(A, s, s).is_zero()
        assert bracket_sections(A, s, t) == -bracket_sections(A, t, s)
        af = sum((A.anchor_apply(i, f) * s.coeffs[i] for i in range(A.rank)), Poly.zero(A.chart))
        assert bracket_sections(A, s, t * f) == bracket_sections(A, s, t) * f + t * af


# --- the differential ------------------------------------------------------------------


def test_differential_examples():
    T = tangent_algebroid(1)
    x = T.chart.var("x")
    d = cochain_diff(T, Cochain.function(T, x * x))
    assert d == Cochain(T, 1, {(0,): x * 2})
    assert cochain_diff(T, Cochain.function(T, x)) == Cochain(T, 1, {(0,): 1})
    s = sl2()
    hstar = Cochain(s, 1, {(0,): 1})
    assert cochain_diff(s, hstar) == Cochain(s, 2, {(1, 2): -1})


def test_degree_above_rank_gives_zero():
    s = sl2()
    top = Cochain(s, 3, {(0, 1, 2): 1})
    assert cochain_diff(s, top).is_zero()


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_differential_matches_cartan_formula(name):
    A = FIXTURES[name]
    rng = random.Random(zlib.crc32(name.encode()))
    for p in range(A.rank + 1):
        xi = random_cochain(A, p, rng, complex_coeffs=True)
        assert same_cochain(cochain_diff(A, xi), cartan_differential(A, xi)), (name, p)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_delta_squared_vanishes(name):
    A = FIXTURES[name]
    rng = random.Random(5)
    for _ in range(10):
        p = rng.randint(0, A.rank)
        xi = random_cochain(A, p, rng, max_degree=3)
        assert cochain_diff(A, cochain_diff(A, xi)).is_zero()


@pytest.mark.parametrize("name", ["tangent3", "sl2", "cotangent(so3)", "bowtie(dolbeault2)"])
def test_differential_is_a_graded_derivation(name):
    A = FIXTURES[name]
    rng = random.Random(8)
    for _ in range(8):
        p, q = rng.randint(0, A.rank), rng.randint(0, A.rank)
        if p + q > A.rank:
            continue
        xi, eta = random_cochain(A, p, rng), random_cochain(A, q, rng)
        lhs = cochain_diff(A, wedge(xi, eta))
        rhs = wedge(cochain_diff(A, xi), eta)
        second = wedge(xi, cochain_diff(A, eta))
        rhs = rhs + second if p % 2 == 0 else rhs - second
        assert lhs == rhs


@pytest.mark.parametrize("name", ["tangent3", "cotangent(so3)", "foliation(1,2)"])
def test_differential_preserves_weight(name):
    A = FIXTURES[name]
    for w in range(-2, 3):
        for p in range(A.rank):
            from lialgebroid.homology import CochainComplex

            cx = CochainComplex(A)
            for lbl in cx.basis(p, w)[:6]:
                xi = cx.element(lbl)
                d = cochain_diff(A, xi)
                assert d.is_zero() or cochain_weight(d) == w


@given(st.permutations(range(3)))
def test_evaluation_on_permuted_tuples(perm):
    s = sl2()
    xi = Cochain(s, 3, {(0, 1, 2): 5})
    gens = [s.generator(k) for k in perm]
    (val,) = evaluate(xi, *gens)
    assert val == Poly.constant(s.chart, 5 * perm_sign(perm))
    assert xi.coefficient(perm) == val


def test_cochain_repeated_index_vanishes():
    s = sl2()
    assert Cochain(s, 2, {(1, 1): 3}).is_zero()
    assert Cochain(s, 2, {(1, 0): 3}) == Cochain(s, 2, {(0, 1): -3})


def test_change_frame_preserves_cohomology():
    from lialgebroid.homology import betti_range

    T = tangent_algebroid(2)
    B = change_frame(T, [[1, 1], [0, 1]])
    assert validate_presentation(B).ok
    assert [t.numbers for t in betti_range(B, range(-1, 3))] == \
        [t.numbers for t in betti_range(T, range(-1, 3))]


def test_wedge_is_graded_commutative():
    A = FIXTURES["tangent3"]
    rng = random.Random(2)
    for p, q in itertools.product(range(3), repeat=2):
        xi, eta = random_cochain(A, p, rng), random_cochain(A, q, rng)
        lhs = wedge(xi, eta)
        rhs = wedge(eta, xi)
        assert lhs == (rhs if (p * q) % 2 == 0 else -rhs)
