"""Exact linear algebra over Q(i).

Two independent rank routes are kept deliberately separate:

* :func:`rank_fraction_free` clears denominators row by row and eliminates
  over the Gaussian integers with sparse rows (the production path);
* :func:`rank_dense_oracle` hands a dense copy to sympy's ``DomainMatrix``
  over ``QQ_I`` and is only used to cross-check.
"""
from __future__ import annotations

from math import gcd, lcm

from .coefficients import ONE, ZERO, Scalar


class SparseMatrix:
    """A matrix over Q(i) stored as ``{(row, col): Scalar}``."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {}
        if entries:
            for (i, j), v in entries.items():
                v = Scalar.coerce(v)
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
                if not v.is_zero():
                    self.entries[(i, j)] = v

    @classmethod
    def from_columns(cls, nrows, columns):
        m = cls(nrows, len(columns))
        for j, col in enumerate(columns):
            for i, v in col.items():
                if not v.is_zero():
                    m.entries[(i, j)] = v
        return m

    @classmethod
    def from_dense(cls, rows):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(nrows, ncols, {(i, j): v for i, row in enumerate(rows)
                                  for j, v in enumerate(row) if Scalar.coerce(v)})

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        return self.entries.get(ij, ZERO)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = dict(self.entries)
        for k, v in other.entries.items():
            s = out.get(k, ZERO) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        m = SparseMatrix(self.nrows, self.ncols)
        m.entries = out
        return m

    def scale(self, c) -> "SparseMatrix":
        c = Scalar.coerce(c)
        m = SparseMatrix(self.nrows, self.ncols)
        if not c.is_zero():
            m.entries = {k: v * c for k, v in self.entries.items()}
        return m

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), ZERO) + a * b
        m = SparseMatrix(self.nrows, other.ncols)
        m.entries = {k: v for k, v in out.items() if not v.is_zero()}
        return m

    def apply(self, vec):
        """Matrix times a dense column vector (list of Scalar)."""
        out = [ZERO] * self.nrows
        for (i, j), v in self.entries.items():
            x = vec[j]
            if not x.is_zero():
                out[i] = out[i] + v * x
        return out

    def submatrix(self, rows, cols) -> "SparseMatrix":
        rmap = {r: a for a, r in enumerate(rows)}
        cmap = {c: b for b, c in enumerate(cols)}
        m = SparseMatrix(len(rows), len(cols))
        m.entries = {(rmap[i], cmap[j]): v for (i, j), v in self.entries.items()
                     if i in rmap and j in cmap}
        return m

    def to_dense(self):
        rows = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def rows(self):
        out = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={len(self.entries)})"


def block_matrix(row_sizes, col_sizes, blocks) -> SparseMatrix:
    """Assemble ``{(bi, bj): SparseMatrix}`` into one matrix."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    m = SparseMatrix(roff[-1], coff[-1])
    for (bi, bj), blk in blocks.items():
        if blk.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block ({bi}, {bj}) has shape {blk.shape}")
        for (i, j), v in blk.entries.items():
            key = (roff[bi] + i, coff[bj] + j)
            s = m.entries.get(key, ZERO) + v
            if s.is_zero():
                m.entries.pop(key, None)
            else:
                m.entries[key] = s
    return m


# --- fraction-free sparse elimination over Z[i] -----------------------------


def _gauss_int_row(row: dict) -> dict:
    den = 1
    for v in row.values():
        den = lcm(den, v.re.denominator, v.im.denominator)
    out = {}
    for j, v in row.items():
        re_ = v.re * den
        im_ = v.im * den
        out[j] = (re_.numerator, im_.numerator)
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for a, b in row.values():
        g = gcd(g, a, b)
        if g == 1:
            return row
    if g > 1:
        return {j: (a // g, b // g) for j, (a, b) in row.items()}
    return row


def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _eliminate(row: dict, prow: dict, col: int) -> dict:
    """Return piv*row - lead*prow, which has no entry in ``col``."""
    piv = prow[col]
    lead = row[col]
    out = {}
    for j, v in row.items():
        out[j] = _gmul(piv, v)
    for j, v in prow.items():
        w = _gmul(lead, v)
        a, b = out.get(j, (0, 0))
        a -= w[0]
        b -= w[1]
        if a or b:
            out[j] = (a, b)
        else:
            out.pop(j, None)
    out.pop(col, None)
    return _primitive(out) if out else out


def rank_fraction_free(m: SparseMatrix) -> int:
    """Rank by sparse fraction-free row reduction over the Gaussian integers."""
    rows = [r for r in m.rows() if r]
    if not rows:
        return 0
    # Rank is transpose-invariant; reduce whichever side has fewer rows.
    if len(rows) > m.ncols:
        t = SparseMatrix(m.ncols, m.nrows)
        t.entries = {(j, i): v for (i, j), v in m.entries.items()}
        rows = [r for r in t.rows() if r]
    pivots = {}
    for r in sorted(rows, key=len):
        row = _gauss_int_row(r)
        while row:
            col = min(row)
            prow = pivots.get(col)
            if prow is None:
                pivots[col] = row
                break
            row = _eliminate(row, prow, col)
    return len(pivots)


# --- dense routines over Scalar ---------------------------------------------


def rref(rows, ncols=None):
    """Reduced row echelon form over Q(i); returns (rows, pivot columns)."""
    a = [list(r) for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(a)):
            if not a[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                ri = a[r]
                a[i] = [x - f * y for x, y in zip(a[i], ri)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(m: SparseMatrix):
    """Basis of the right kernel, as dense lists of Scalar."""
    if m.ncols == 0:
        return []
    if m.nrows == 0 or m.is_zero():
        basis = []
        for j in range(m.ncols):
            v = [ZERO] * m.ncols
            v[j] = ONE
            basis.append(v)
        return basis
    red, pivots = rref(m.to_dense(), m.ncols)
    free = [j for j in range(m.ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * m.ncols
        v[f] = ONE
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def vectors_rank(vectors, dim) -> int:
    """Rank of a list of dense vectors of length ``dim``."""
    if not vectors or dim == 0:
        return 0
    m = SparseMatrix(len(vectors), dim)
    for i, v in enumerate(vectors):
        for j, x in enumerate(v):
            if not x.is_zero():
                m.entries[(i, j)] = x
    return rank_fraction_free(m)


def inverse(matrix):
    """Inverse of a square dense matrix over Q(i); raises if singular."""
    n = len(matrix)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(matrix)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def dense_matmul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[ZERO] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            x = a[i][t]
            if x.is_zero():
                continue
            bt = b[t]
            row = out[i]
            for j in range(m):
                if not bt[j].is_zero():
                    row[j] = row[j] + x * bt[j]
    return out


# --- independent dense oracle -------------------------------------------------


def rank_dense_oracle(m: SparseMatrix) -> int:
    """Rank through sympy's dense DomainMatrix over QQ_I (test oracle)."""
    if m.nrows == 0 or m.ncols == 0 or m.is_zero():
        return 0
    from sympy import QQ, QQ_I
    from sympy.polys.matrices import DomainMatrix

    def conv(v):
        return QQ_I(QQ(v.re.numerator, v.re.denominator), QQ(v.im.numerator, v.im.denominator))

    zero = QQ_I.zero
    rows = [[zero] * m.ncols for _ in range(m.nrows)]
    for (i, j), v in m.entries.items():
        rows[i][j] = conv(v)
    return DomainMatrix(rows, (m.nrows, m.ncols), QQ_I).rank()
