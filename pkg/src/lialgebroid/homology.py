"""Weight slices of cochain complexes, Betti numbers, and spectral pages.

All complexes handled here are graded by weight (polynomial weight plus
generator weights), and every weight slice is finite dimensional.  Bases are
listed with exterior index tuples in colex order, then the module index, then
coefficient monomials in descending graded-lex order.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .algebroid import (
    AlgebroidError,
    AlgebroidPresentation,
    Cochain,
    check_homogeneity,
    differential,
)
from .coefficients import ONE, Poly
from .exterior import subsets
from .linalg import (
    SparseMatrix,
    nullspace,
    rank_dense_oracle,
    rank_fraction_free,
    vectors_rank,
)


class ComplexError(AlgebroidError):
    """D^2 != 0, or some other structural defect of a complex."""


class InhomogeneousError(AlgebroidError):
    pass


@dataclass
class ChainComplexSlice:
    """Finite bases per degree and exact differentials D_k: C^k -> C^{k+1}."""

    weight: int
    bases: dict
    matrices: dict

    @property
    def degrees(self):
        return sorted(self.bases)

    def dim(self, k) -> int:
        return len(self.bases.get(k, ()))

    def matrix(self, k) -> SparseMatrix:
        m = self.matrices.get(k)
        if m is None:
            return SparseMatrix(self.dim(k + 1), self.dim(k))
        return m

    def check(self):
        """Raise ComplexError unless every D_{k+1} D_k vanishes."""
        for k in self.degrees:
            if k + 1 in self.bases:
                prod = self.matrix(k + 1) @ self.matrix(k)
                if not prod.is_zero():
                    raise ComplexError(f"D^2 != 0 from degree {k} at weight {self.weight}")

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.dim(k) for k in self.degrees)


@dataclass
class BettiTable:
    weight: int
    entries: list
    ranks: dict = field(default_factory=dict, repr=False)

    @property
    def numbers(self) -> tuple:
        return tuple(b for _, b in self.entries)

    def __getitem__(self, k):
        for d, b in self.entries:
            if d == k:
                return b
        return 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in self.entries)


def _rank(m: SparseMatrix, oracle: bool) -> int:
    return rank_dense_oracle(m) if oracle else rank_fraction_free(m)


def betti(slice_: ChainComplexSlice, oracle: bool = False, check: bool = True) -> BettiTable:
    """dim ker D_k - rank D_{k-1} per degree, by exact elimination.

    With ``oracle=True`` the ranks come from the independent dense
    eliminator instead of the sparse fraction-free one.
    """
    if check:
        slice_.check()
    ranks = {k: _rank(slice_.matrix(k), oracle) for k in slice_.degrees}
    entries = []
    for k in slice_.degrees:
        b = slice_.dim(k) - ranks[k] - ranks.get(k - 1, 0)
        if b < 0:
            raise ComplexError(f"negative Betti number in degree {k}")
        entries.append((k, b))
    return BettiTable(slice_.weight, entries, ranks)


# --- cochain complexes of an algebroid ----------------------------------------


class CochainComplex:
    """The complex Gamma(Lambda^* A^* (x) E^*) of an algebroid, optionally
    twisted by a representation, sliced by weight."""

    def __init__(self, presentation: AlgebroidPresentation, representation=None,
                 max_degree=None):
        self.presentation = presentation
        self.representation = representation
        if representation is not None and representation.source is not presentation:
            raise AlgebroidError("representation is not on this algebroid")
        self.value_rank = representation.rank if representation is not None else 1
        self.module_weights = (representation.weights if representation is not None
                               else (0,))
        self.max_degree = presentation.rank if max_degree is None else min(max_degree,
                                                                          presentation.rank)
        self._homogeneous = None

    def ensure_homogeneous(self):
        if self._homogeneous is None:
            rep = check_homogeneity(self.presentation)
            if rep and self.representation is not None:
                from .representations import check_representation_homogeneity
                rep = check_representation_homogeneity(self.representation)
            self._homogeneous = rep
        if not self._homogeneous:
            raise InhomogeneousError(f"inhomogeneous data: {self._homogeneous.witness}")

    def basis(self, k: int, w: int) -> list:
        A = self.presentation
        chart = A.chart
        out = []
        for I in subsets(A.rank, k):
            shift = sum(A.weights[i] for i in I)
            for a in range(self.value_rank):
                for exp in chart.monomials_of_weight(w + shift + self.module_weights[a]):
                    out.append((I, a, exp))
        return out

    def element(self, label) -> Cochain:
        I, a, exp = label
        A = self.presentation
        zero = Poly.zero(A.chart)
        val = [zero] * self.value_rank
        val[a] = Poly.monomial(A.chart, exp)
        return Cochain._raw(A, len(I), {I: tuple(val)}, self.value_rank)

    def apply(self, xi: Cochain) -> Cochain:
        gammas = self.representation.gammas if self.representation is not None else None
        return differential(self.presentation, xi, gammas)

    def coordinates(self, xi: Cochain, index: dict) -> dict:
        out = {}
        for I, v in xi.terms.items():
            for a, f in enumerate(v):
                for exp, c in f.terms.items():
                    try:
                        out[index[(I, a, exp)]] = c
                    except KeyError:
                        raise ComplexError(f"term {(I, a, exp)} is outside the target slice") from None
        return out

    def from_coordinates(self, basis, vec) -> Cochain:
        A = self.presentation
        xi = Cochain.zero(A, len(basis[0][0]) if basis else 0, self.value_rank)
        for label, c in zip(basis, vec):
            if not c.is_zero():
                xi = xi + self.element(label) * c
        return xi

    def differential_matrix(self, k: int, w: int):
        self.ensure_homogeneous()
        src = self.basis(k, w)
        tgt = self.basis(k + 1, w) if k + 1 <= self.max_degree else []
        index = {lbl: t for t, lbl in enumerate(tgt)}
        cols = []
        for lbl in src:
            if not tgt:
                cols.append({})
                continue
            cols.append(self.coordinates(self.apply(self.element(lbl)), index))
        return SparseMatrix.from_columns(len(tgt), cols), src, tgt

    def slice(self, w: int) -> ChainComplexSlice:
        self.ensure_homogeneous()
        bases = {k: self.basis(k, w) for k in range(self.max_degree + 1)}
        matrices = {}
        for k in range(self.max_degree):
            matrices[k] = self.differential_matrix(k, w)[0]
        return ChainComplexSlice(w, bases, matrices)


def differential_matrix(complex_, k: int, w: int):
    """Matrix of the differential C^k -> C^{k+1} at weight w, with both bases.

    ``complex_`` is a CochainComplex, an AlgebroidPresentation, or a
    Representation.
    """
    return as_complex(complex_).differential_matrix(k, w)


def as_complex(obj, max_degree=None):
    from .representations import Representation
    if isinstance(obj, CochainComplex):
        return obj
    if isinstance(obj, AlgebroidPresentation):
        return CochainComplex(obj, max_degree=max_degree)
    if isinstance(obj, Representation):
        return CochainComplex(obj.source, obj, max_degree=max_degree)
    if hasattr(obj, "cochain_complex"):
        return obj.cochain_complex(max_degree=max_degree)
    if hasattr(obj, "slice") and hasattr(obj, "differential_matrix"):
        return obj
    raise TypeError(f"cannot build a cochain complex from {type(obj).__name__}")


def complex_slice(obj, w: int, max_degree=None) -> ChainComplexSlice:
    return as_complex(obj, max_degree).slice(w)


def betti_range(obj, weights, threads: int = 1, oracle: bool = False, max_degree=None):
    """Betti tables for several weights; slices are independent and may be
    computed on a thread pool.  Results are returned in weight order."""
    cx = as_complex(obj, max_degree)
    weights = list(weights)

    def one(w):
        return betti(cx.slice(w), oracle=oracle)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, weights))
    return [one(w) for w in weights]


def degree_zero_kernel(obj, w: int) -> list:
    """Basis of the degree-0 cocycles at weight w (Casimir-type functions)."""
    cx = as_complex(obj)
    m, src, _ = cx.differential_matrix(0, w)
    return [cx.from_coordinates(src, v) for v in nullspace(m)]


# --- spectral sequences of filtered slices ------------------------------------


@dataclass
class SpectralPage:
    index: int
    table: dict
    boundary_ranks: dict = field(default_factory=dict, repr=False)

    def total(self, k) -> int:
        return sum(d for (p, q), d in self.table.items() if p + q == k)

    def totals(self, degrees) -> tuple:
        return tuple(self.total(k) for k in degrees)

    def __getitem__(self, pq):
        return self.table.get(pq, 0)


@dataclass
class FilteredComplex:
    """A complex slice whose filtration is spanned by basis vectors:
    F_p C^k is spanned by the basis elements with ``filtration[k][j] >= p``."""

    complex: ChainComplexSlice
    filtration: dict

    def subcomplex(self, p: int) -> ChainComplexSlice:
        cx = self.complex
        keep = {k: [j for j, f in enumerate(self.filtration[k]) if f >= p] for k in cx.degrees}
        bases = {k: [cx.bases[k][j] for j in keep[k]] for k in cx.degrees}
        matrices = {}
        for k in cx.degrees:
            if k + 1 in cx.bases:
                matrices[k] = cx.matrix(k).submatrix(keep[k + 1], keep[k])
        return ChainComplexSlice(cx.weight, bases, matrices)

    def filtration_range(self):
        vals = [f for fs in self.filtration.values() for f in fs]
        if not vals:
            return 0, -1
        return min(vals), max(vals)

    def check(self):
        cx = self.complex
        for k in cx.degrees:
            if k + 1 not in cx.bases:
                continue
            for (i, j), _ in cx.matrix(k).entries.items():
                if self.filtration[k + 1][i] < self.filtration[k][j]:
                    raise ComplexError(f"differential lowers the filtration in degree {k}")

    def _cycles(self, k, p, r):
        """Basis of Z_r^p in degree k; r < 0 means all of F_p."""
        cx = self.complex
        fk = self.filtration.get(k, [])
        cols = [j for j, f in enumerate(fk) if f >= p]
        dim = cx.dim(k)
        if not cols:
            return []
        if r < 0 or k + 1 not in cx.bases:
            vecs = []
            for j in cols:
                v = [ONE.__class__(0)] * dim
                v[j] = ONE
                vecs.append(v)
            return vecs
        rows = [i for i, f in enumerate(self.filtration[k + 1]) if f < p + r]
        sub = cx.matrix(k).submatrix(rows, cols)
        out = []
        for v in nullspace(sub):
            full = [ONE.__class__(0)] * dim
            for j, x in zip(cols, v):
                full[j] = x
            out.append(full)
        return out

    def page_dimension(self, k, p, r):
        """dim E_r^{p, k-p} = dim Z_r^p / (Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1})."""
        z = self._cycles(k, p, r)
        if not z:
            return 0, 0
        dim = self.complex.dim(k)
        denom = list(self._cycles(k, p + 1, r - 1))
        if k - 1 in self.complex.bases:
            D = self.complex.matrix(k - 1)
            for v in self._cycles(k - 1, p - r + 1, r - 1):
                denom.append(D.apply(v))
        rk = vectors_rank(denom, dim)
        return len(z) - rk, rk

    def pages(self, max_page: int = 2) -> list:
        self.check()
        lo, hi = self.filtration_range()
        out = []
        for r in range(max_page + 1):
            table = {}
            ranks = {}
            for k in self.complex.degrees:
                for p in range(lo, hi + 1):
                    d, rk = self.page_dimension(k, p, r)
                    if d:
                        table[(p, k - p)] = d
                    ranks[(p, k - p)] = rk
            out.append(SpectralPage(r, table, ranks))
        return out


def spectral_pages(obj, max_page: int = 2) -> list:
    """E_0..E_max_page for a double complex slice (first filtration, by the
    A1-degree) or for any FilteredComplex."""
    filtered = obj if isinstance(obj, FilteredComplex) else obj.filtered_total()
    return filtered.pages(max_page)
