"""Standard algebroids: the tangent algebroid of an affine chart, a Lie
algebra sitting over a point, and the tangential algebroid of the split
foliation Z x Y."""
from __future__ import annotations

from dataclasses import dataclass

from .algebroid import AlgebroidError, AlgebroidPresentation
from .coefficients import Chart, Poly


def default_variables(n: int) -> tuple:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{k + 1}" for k in range(n))


def tangent_algebroid(n) -> AlgebroidPresentation:
    """T on an n-dimensional chart (or on a given Chart): identity anchor,
    zero brackets, generator d/dx_j of weight -weight(x_j)."""
    chart = n if isinstance(n, Chart) else None
    if chart is None:
        if n < 1:
            raise AlgebroidError("tangent algebroid needs at least one variable")
        chart = Chart(default_variables(n))
    elif chart.nvars < 1:
        raise AlgebroidError("tangent algebroid needs at least one variable")
    return _coordinate_algebroid(chart, chart.variables)


def _coordinate_algebroid(chart: Chart, variables) -> AlgebroidPresentation:
    idx = [chart.index(v) for v in variables]
    r = len(idx)
    zero = Poly.zero(chart)
    one = Poly.constant(chart, 1)
    anchor = [[one if j == idx[i] else zero for j in range(chart.nvars)] for i in range(r)]
    table = [[[zero] * r for _ in range(r)] for _ in range(r)]
    names = [f"d_{chart.variables[k]}" for k in idx]
    weights = [-chart.weights[k] for k in idx]
    return AlgebroidPresentation(chart, names, weights, anchor, table)


def lie_algebra_point(structure, names=None) -> AlgebroidPresentation:
    """A Lie algebra as an algebroid over a point (zero anchor).

    ``structure`` is either a full r x r x r table of constants or a dict
    ``{(i, j): {k: c}}`` listing brackets for i < j.  Jacobi is not checked
    here; see :func:`validate_presentation`.
    """
    chart = Chart(())
    if isinstance(structure, dict):
        if names is None:
            used = [0]
            for (i, j), vec in structure.items():
                used += [i, j, *vec]
            names = [f"e{k + 1}" for k in range(1 + max(used))]
        return AlgebroidPresentation.from_brackets(chart, names, brackets=structure,
                                                   weights=[0] * len(names))
    r = len(structure)
    if names is None:
        names = [f"e{k + 1}" for k in range(r)]
    table = [[[c if isinstance(c, Poly) else Poly.constant(chart, c) for c in vec]
              for vec in row] for row in structure]
    return AlgebroidPresentation(chart, names, [0] * r, [[] for _ in range(r)], table)


def abelian(r: int) -> AlgebroidPresentation:
    return lie_algebra_point({}, names=[f"e{k + 1}" for k in range(r)])


def sl2() -> AlgebroidPresentation:
    """[h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return lie_algebra_point({("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}},
                             names=["h", "e", "f"])


def heisenberg3() -> AlgebroidPresentation:
    """[e1, e2] = e3."""
    return lie_algebra_point({(0, 1): {2: 1}}, names=["e1", "e2", "e3"])


@dataclass(frozen=True)
class FoliationModel:
    """Leafwise tangent algebroid of Z x Y: generators d/dz_1..d/dz_m."""

    chart: Chart
    leaf_variables: tuple
    transverse_variables: tuple
    presentation: AlgebroidPresentation


def foliation_algebroid(m, n=None) -> FoliationModel:
    """Either ``foliation_algebroid(m, n)`` on a fresh chart z1..zm, y1..y(n-m),
    or ``foliation_algebroid(chart, leaf_variables)``."""
    if isinstance(m, Chart):
        chart = m
        leaf = tuple(n)
        if not leaf:
            raise AlgebroidError("a foliation needs at least one leaf variable")
    else:
        if n is None:
            raise AlgebroidError("total dimension missing")
        if not (1 <= m <= n):
            raise AlgebroidError(f"leaf dimension must satisfy 1 <= m <= n (got m={m}, n={n})")
        leaf = tuple(f"z{k + 1}" for k in range(m))
        chart = Chart(leaf + tuple(f"y{k + 1}" for k in range(n - m)))
    for v in leaf:
        chart.index(v)
    transverse = tuple(v for v in chart.variables if v not in leaf)
    return FoliationModel(chart, leaf, transverse, _coordinate_algebroid(chart, leaf))
