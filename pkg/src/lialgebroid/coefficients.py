"""Exact scalars over the Gaussian rationals and polynomials on a named chart.

Every structure function, anchor entry and connection coefficient in the
package is a :class:`Poly`.  Coefficients live in Q(i), so both the +/-i
eigenprojections of an almost complex structure and complex conjugation stay
exact.  Antiholomorphic coordinates are ordinary chart variables linked to
their holomorphic partners by the chart's conjugation pairing.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping


class ChartMismatchError(ValueError):
    """Raised when polynomials on different charts are combined, or an
    unknown variable is requested."""


class PolyParseError(ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot make an exact rational from {type(x).__name__}")


class Scalar:
    """An element re + im*i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact; use Scalar(re, im)")
        return cls(x)

    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not self.im and not other.im:
            return Scalar(self.re * other.re)
        return Scalar(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("Scalar division by zero")
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Scalar(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return not self.is_zero()

    def is_real(self) -> bool:
        return not self.im

    def __eq__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        re_s = _fstr(self.re)
        if not self.im:
            return re_s
        if self.im == 1:
            im_s = "i"
        elif self.im == -1:
            im_s = "-i"
        else:
            im_s = f"{_fstr(self.im)}*i"
        if not self.re:
            return im_s
        if im_s.startswith("-"):
            return f"{re_s}{im_s}"
        return f"{re_s}+{im_s}"

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        p = parse_poly(text, Chart(()))
        return p.constant_term() if p.is_constant() else _raise_nonconstant(text)


def _raise_nonconstant(text):
    raise PolyParseError(f"not a scalar: {text!r}")


def _coerce_or_none(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    return None


def _fstr(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


I = Scalar(0, 1)
ZERO = Scalar(0)
ONE = Scalar(1)


@dataclass(frozen=True)
class Chart:
    """An affine chart: ordered variable names, a conjugation involution and
    positive integer weights.

    ``pairs`` lists (holomorphic, antiholomorphic) variable name pairs; every
    variable not mentioned is self-conjugate.
    """

    variables: tuple
    pairs: tuple = ()
    weights: tuple = None
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _conj: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in chart {variables}")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v) or v == "i":
                raise ValueError(f"invalid variable name {v!r}")
        weights = self.weights
        if weights is None:
            weights = (1,) * len(variables)
        weights = tuple(int(w) for w in weights)
        if len(weights) != len(variables):
            raise ValueError("one weight per variable required")
        if any(w < 1 for w in weights):
            raise ValueError("variable weights must be positive")
        object.__setattr__(self, "weights", weights)
        index = {v: k for k, v in enumerate(variables)}
        object.__setattr__(self, "_index", index)
        conj = list(range(len(variables)))
        pairs = tuple(tuple(p) for p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        seen = set()
        for hol, anti in pairs:
            if hol not in index or anti not in index:
                raise ValueError(f"conjugation pair ({hol}, {anti}) names unknown variables")
            if hol == anti or hol in seen or anti in seen:
                raise ValueError(f"conjugation pairing is not an involution at ({hol}, {anti})")
            seen.update((hol, anti))
            a, b = index[hol], index[anti]
            if weights[a] != weights[b]:
                raise ValueError(f"paired variables {hol}, {anti} must share a weight")
            conj[a], conj[b] = b, a
        object.__setattr__(self, "_conj", tuple(conj))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name) -> int:
        if isinstance(name, int):
            if 0 <= name < self.nvars:
                return name
            raise ChartMismatchError(f"variable index {name} out of range")
        try:
            return self._index[name]
        except KeyError:
            raise ChartMismatchError(f"unknown variable {name!r} on chart {self.variables}") from None

    def conjugate_index(self, k: int) -> int:
        return self._conj[k]

    def has_conjugation(self) -> bool:
        return bool(self.pairs)

    def holomorphic_indices(self) -> tuple:
        return tuple(self._index[h] for h, _ in self.pairs)

    def antiholomorphic_indices(self) -> tuple:
        return tuple(self._index[a] for _, a in self.pairs)

    def var(self, name) -> "Poly":
        k = self.index(name)
        exp = [0] * self.nvars
        exp[k] = 1
        return Poly(self, {tuple(exp): ONE})

    def gens(self) -> tuple:
        return tuple(self.var(v) for v in self.variables)

    def monomial_weight(self, exp) -> int:
        return sum(e * w for e, w in zip(exp, self.weights))

    def monomials_of_weight(self, weight: int) -> list:
        """Exponent vectors of the given weight, in descending graded-lex order."""
        if weight < 0:
            return []
        out = []
        n = self.nvars

        def rec(k, remaining, prefix):
            if k == n:
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            w = self.weights[k]
            for e in range(remaining // w, -1, -1):
                prefix.append(e)
                rec(k + 1, remaining - e * w, prefix)
                prefix.pop()

        rec(0, weight, [])
        out.sort(key=_grlex_key, reverse=True)
        return out

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)


def _grlex_key(exp):
    return (sum(exp), exp)


class Poly:
    """A polynomial with coefficients in Q(i) on a fixed chart.

    Terms are kept as ``{exponent tuple: Scalar}`` with zero coefficients
    dropped.  Instances are treated as immutable.
    """

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: Mapping | None = None):
        self.chart = chart
        clean = {}
        if terms:
            n = chart.nvars
            for exp, c in terms.items():
                c = Scalar.coerce(c)
                if c.is_zero():
                    continue
                exp = tuple(exp)
                if len(exp) != n:
                    raise ChartMismatchError("exponent length does not match chart")
                clean[exp] = c
        self.terms = clean

    @classmethod
    def _raw(cls, chart, terms):
        p = object.__new__(cls)
        p.chart = chart
        p.terms = terms
        return p

    @classmethod
    def constant(cls, chart: Chart, c) -> "Poly":
        c = Scalar.coerce(c)
        if c.is_zero():
            return cls._raw(chart, {})
        return cls._raw(chart, {(0,) * chart.nvars: c})

    @classmethod
    def zero(cls, chart: Chart) -> "Poly":
        return cls._raw(chart, {})

    @classmethod
    def monomial(cls, chart: Chart, exp, c=1) -> "Poly":
        return cls(chart, {tuple(exp): c})

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.chart != self.chart:
                raise ChartMismatchError(
                    f"charts differ: {self.chart.variables} vs {other.chart.variables}")
            return other
        if isinstance(other, (Scalar, int, Fraction)):
            return Poly.constant(self.chart, other)
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.chart.nvars, ZERO)

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return Poly._raw(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.chart, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            c = Scalar.coerce(other)
            if c.is_zero():
                return Poly._raw(self.chart, {})
            if c == ONE:
                return self
            return Poly._raw(self.chart, {e: v * c for e, v in self.terms.items()})
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = out.get(e)
                out[e] = c if s is None else s + c
        return Poly._raw(self.chart, {e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        out = Poly.constant(self.chart, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            other = Poly.constant(self.chart, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables_used(self) -> set:
        used = set()
        for e in self.terms:
            used.update(k for k, a in enumerate(e) if a)
        return used

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def conjugate(p: Poly) -> Poly:
    """Conjugate coefficients and swap each variable with its partner."""
    chart = p.chart
    perm = chart._conj
    out = {}
    for e, c in p.terms.items():
        new = [0] * chart.nvars
        for k, a in enumerate(e):
            if a:
                new[perm[k]] = a
        out[tuple(new)] = c.conjugate()
    return Poly._raw(chart, out)


def pderiv(p: Poly, v) -> Poly:
    k = p.chart.index(v)
    out = {}
    for e, c in p.terms.items():
        a = e[k]
        if a:
            new = e[:k] + (a - 1,) + e[k + 1:]
            out[new] = c * a
    return Poly._raw(p.chart, out)


def poly_weight(p: Poly):
    """The common weight of all terms, or None when p is zero or inhomogeneous."""
    ws = {p.chart.monomial_weight(e) for e in p.terms}
    if len(ws) == 1:
        return ws.pop()
    return None


def is_homogeneous(p: Poly, weight: int) -> bool:
    return all(p.chart.monomial_weight(e) == weight for e in p.terms)


def homog_components(p: Poly) -> list:
    """Split p into weight-homogeneous pieces, ordered by decreasing weight."""
    buckets = {}
    for e, c in p.terms.items():
        buckets.setdefault(p.chart.monomial_weight(e), {})[e] = c
    return [(w, Poly._raw(p.chart, buckets[w])) for w in sorted(buckets, reverse=True)]


def is_holomorphic(p: Poly) -> bool:
    """True when no antiholomorphic variable of the chart occurs in p."""
    anti = set(p.chart.antiholomorphic_indices())
    return not (p.variables_used() & anti)


def is_antiholomorphic(p: Poly) -> bool:
    hol = set(p.chart.holomorphic_indices())
    return not (p.variables_used() & hol)


def substitute_constant(p: Poly, values: Mapping) -> Poly:
    """Evaluate selected variables at scalar values."""
    chart = p.chart
    idx = {chart.index(k): Scalar.coerce(v) for k, v in values.items()}
    out = Poly.zero(chart)
    for e, c in p.terms.items():
        coeff = c
        new = list(e)
        for k, val in idx.items():
            if new[k]:
                coeff = coeff * val ** new[k]
                new[k] = 0
        out = out + Poly.monomial(chart, new, coeff)
    return out


# --- text serialization -------------------------------------------------


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    names = p.chart.variables
    pieces = []
    for e, c in p.sorted_terms():
        factors = []
        for k, a in enumerate(e):
            if a == 1:
                factors.append(names[k])
            elif a:
                factors.append(f"{names[k]}^{a}")
        neg = False
        if c.re and c.im:
            cs = f"({c})"
        else:
            if (c.re < 0) or (not c.re and c.im < 0):
                neg = True
                c = -c
            cs = str(c)
        if factors:
            if cs == "1":
                body = "*".join(factors)
            else:
                body = "*".join([cs] + factors)
        else:
            body = cs
        pieces.append((neg, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character {text[pos:pos + 1]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := factor (('*'|'/') factor)*
    # factor := atom ['^' int]
    # atom   := int | name | 'i' | '(' expr ')'

    def __init__(self, text, chart):
        self.toks = _tokenize(text)
        self.k = 0
        self.chart = chart

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect_op(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise PolyParseError(f"expected {op!r}", t[2])

    def parse(self):
        if self.peek()[0] == "end":
            raise PolyParseError("empty polynomial", 0)
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise PolyParseError(f"unexpected token {t[1]!r}", t[2])
        return p

    def expr(self):
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                q = self.term()
                p = p + q if t[1] == "+" else p - q
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                p = p * self.factor()
            elif t[0] == "op" and t[1] == "/":
                self.take()
                d = self.factor()
                if not d.is_constant() or d.is_zero():
                    raise PolyParseError("division only by nonzero constants", t[2])
                p = p * d.constant_term().inverse()
            else:
                return p

    def factor(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "num":
                raise PolyParseError("exponent must be a non-negative integer", e[2])
            base = base ** e[1]
        return base

    def atom(self):
        t = self.take()
        chart = self.chart
        if t[0] == "num":
            return Poly.constant(chart, t[1])
        if t[0] == "name":
            if t[1] == "i":
                return Poly.constant(chart, I)
            if t[1] not in chart._index:
                raise PolyParseError(f"unknown variable {t[1]!r}", t[2])
            return chart.var(t[1])
        if t[0] == "op" and t[1] == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        if t[0] == "op" and t[1] == "-":
            return -self.factor()
        raise PolyParseError("unexpected end of input" if t[0] == "end" else f"unexpected token {t[1]!r}", t[2])


def parse_poly(text: str, chart: Chart) -> Poly:
    """Parse the textual form produced by :func:`format_poly` (and any
    whitespace variant of it)."""
    return _Parser(text, chart).parse()


def random_poly(chart: Chart, rng, max_degree=2, nterms=3, coeff_range=3, complex_coeffs=False,
                variables: Iterable | None = None) -> Poly:
    """A small random polynomial, for probes and property tests."""
    idx = list(range(chart.nvars)) if variables is None else [chart.index(v) for v in variables]
    out = Poly.zero(chart)
    for _ in range(nterms):
        exp = [0] * chart.nvars
        for _ in range(rng.randint(0, max_degree)):
            if idx:
                exp[rng.choice(idx)] += 1
        re_ = rng.randint(-coeff_range, coeff_range)
        im_ = rng.randint(-coeff_range, coeff_range) if complex_coeffs else 0
        out = out + Poly.monomial(chart, exp, Scalar(re_, im_))
    return out


def monomials_up_to_degree(chart: Chart, degree: int):
    """All exponent vectors of total degree <= degree."""
    n = chart.nvars
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), d):
            exp = [0] * n
            for k in combo:
                exp[k] += 1
            yield tuple(exp)
