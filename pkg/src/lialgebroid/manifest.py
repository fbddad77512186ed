"""Line-oriented manifest format.

A manifest holds one optional ``chart`` block, named object blocks and
``task`` lines::

    # comments start with '#'
    chart {
      variables = z, w, zb, wb
      pairs = z:zb, w:wb
      weights = 1, 1, 1, 1
    }

    algebroid A {
      generators = e1, e2
      weights = 0, 0
      anchor e1 x = y          # a(e1) has d/dx coefficient y
      bracket e1 e2 e2 = 1     # {e1, e2} has e2 coefficient 1
    }

    model sl2 { ... }          # model = tangent | lie_algebra | foliation
    representation R { on = A; rank = 2; gamma e1 1 2 = x }
    matched_pair M { a1 = A; a2 = B; nabla12 = R12; nabla21 = R21 }
    poisson P { coefficient x y = 1 }
    acs S { on = A; j e2 e1 = 1; j e1 e2 = -1; jm y x = 1; jm x y = -1 }

    task betti sl2 weights=0..0

Statements inside a block are separated by newlines or ';'.  A block may
also be written on a single line.  Every diagnostic carries the line and
column of the offending token.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from .coefficients import Chart, PolyParseError, parse_poly

OBJECT_KINDS = ("algebroid", "model", "representation", "matched_pair", "poisson", "acs")
TASK_KINDS = {
    "verify": (1, 1),
    "verify-matched": (1, 1),
    "betti": (1, 1),
    "total-betti": (1, 1),
    "spectral": (1, 1),
    "nijenhuis": (1, 1),
    "split": (1, 1),
    "jacobi": (1, 1),
    "lichnerowicz-betti": (1, 1),
    "casimirs": (1, 1),
    "skew-pair": (2, 2),
    "bihamiltonian": (2, 2),
}
TASK_KEYS = {"weights", "max-degree", "pages", "tangential"}


class ManifestError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass
class Statement:
    """``words = value`` inside a block; ``words`` holds the key and its
    arguments, e.g. ``['bracket', 'e1', 'e2', 'e3']``."""

    words: list
    value: str
    line: int
    column: int
    value_column: int

    @property
    def key(self):
        return self.words[0]


@dataclass
class Block:
    kind: str
    name: str | None
    line: int
    column: int
    statements: list = field(default_factory=list)

    def get(self, key, default=None):
        for st in self.statements:
            if st.key == key and len(st.words) == 1:
                return st
        return default

    def all(self, key):
        return [st for st in self.statements if st.key == key]


@dataclass
class Task:
    kind: str
    objects: list
    params: dict
    line: int
    column: int


@dataclass
class Manifest:
    chart: Chart | None
    blocks: dict
    tasks: list
    source: str = ""

    @property
    def object_names(self):
        return list(self.blocks)


_WORD = re.compile(r"[^\s{};=]+")


def _split_statements(text, line_no, col0):
    """Split ``text`` on ';' and yield (segment, column)."""
    col = col0
    for seg in text.split(";"):
        yield seg, col
        col += len(seg) + 1


def _parse_statement(seg, line_no, col):
    stripped = seg.strip()
    if not stripped:
        return None
    lead = col + (len(seg) - len(seg.lstrip()))
    if "=" not in stripped:
        raise ManifestError(f"expected 'key = value', got {stripped!r}", line_no, lead)
    left, right = seg.split("=", 1)
    words = left.split()
    if not words:
        raise ManifestError("missing key before '='", line_no, lead)
    for w in words:
        if not _WORD.fullmatch(w):
            raise ManifestError(f"invalid token {w!r}", line_no, lead)
    value = right.strip()
    vcol = col + len(left) + 1 + (len(right) - len(right.lstrip()))
    if not value:
        raise ManifestError(f"missing value for {words[0]!r}", line_no, vcol)
    return Statement(words, value, line_no, lead, vcol)


def _strip_comment(raw):
    k = raw.find("#")
    return raw if k < 0 else raw[:k]


def parse_manifest(text: str) -> Manifest:
    """Parse manifest text; raises :class:`ManifestError` with a position on
    any problem and never anything else."""
    try:
        return _parse(text)
    except ManifestError:
        raise
    except Exception as exc:  # parsing must be total
        raise ManifestError(f"internal parse failure: {exc}") from exc


def _parse(text: str) -> Manifest:
    if not isinstance(text, str):
        raise ManifestError("manifest must be text")
    blocks = {}
    chart_block = None
    tasks = []
    current = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        body = line.strip()
        if current is None:
            if body.startswith("task ") or body == "task":
                tasks.append(_parse_task(body, line_no, col))
                continue
            m = re.match(r"([A-Za-z_]+)(?:\s+([A-Za-z_][A-Za-z0-9_]*))?\s*\{", body)
            if not m:
                raise ManifestError(f"expected a block header or task line, got {body!r}",
                                    line_no, col)
            kind, name = m.group(1), m.group(2)
            if kind == "chart":
                if name is not None:
                    raise ManifestError("the chart block takes no name", line_no, col)
                if chart_block is not None:
                    raise ManifestError("duplicate chart block", line_no, col)
            elif kind not in OBJECT_KINDS:
                raise ManifestError(f"unknown block kind {kind!r}", line_no, col)
            elif name is None:
                raise ManifestError(f"{kind} block needs a name", line_no, col)
            elif name in blocks:
                raise ManifestError(f"duplicate object name {name!r}", line_no,
                                    col + body.index(name))
            current = Block(kind, name, line_no, col)
            rest = body[m.end():]
            rest_col = col + m.end()
        else:
            rest, rest_col = body, col
        closed = False
        if "}" in rest:
            k = rest.index("}")
            if rest[k + 1:].strip():
                raise ManifestError("unexpected text after '}'", line_no, rest_col + k + 1)
            rest = rest[:k]
            closed = True
        if "{" in rest:
            raise ManifestError("nested blocks are not allowed", line_no, rest_col + rest.index("{"))
        for seg, c in _split_statements(rest, line_no, rest_col):
            st = _parse_statement(seg, line_no, c)
            if st is not None:
                current.statements.append(st)
        if closed:
            if current.kind == "chart":
                chart_block = current
            else:
                blocks[current.name] = current
            current = None
    if current is not None:
        raise ManifestError(f"block {current.name or current.kind!r} is never closed",
                            current.line, current.column)
    if chart_block is None and not blocks and not tasks:
        raise ManifestError("empty manifest: no chart, objects or tasks", 1, 1)
    chart = _build_chart(chart_block) if chart_block is not None else None
    manifest = Manifest(chart, blocks, tasks, text)
    _check_references(manifest)
    _check_polynomials(manifest)
    return manifest


def _parse_task(body, line_no, col):
    parts = [(m.group(0), m.start()) for m in re.finditer(r"\S+", body)]
    if len(parts) < 2:
        raise ManifestError("task line needs a kind", line_no, col)
    kind, kcol = parts[1]
    if kind not in TASK_KINDS:
        raise ManifestError(f"unknown task kind {kind!r}", line_no, col + kcol)
    objects, params = [], {}
    for word, off in parts[2:]:
        if "=" in word:
            key, _, val = word.partition("=")
            if key not in TASK_KEYS:
                raise ManifestError(f"unknown task parameter {key!r}", line_no, col + off)
            if key == "weights":
                try:
                    params[key] = parse_range(val)
                except ValueError as exc:
                    raise ManifestError(str(exc), line_no, col + off + len(key) + 1) from None
            elif key in ("max-degree", "pages"):
                if not re.fullmatch(r"\d+", val):
                    raise ManifestError(f"{key} must be a nonnegative integer", line_no,
                                        col + off + len(key) + 1)
                params[key] = int(val)
            else:
                if val not in ("true", "false"):
                    raise ManifestError(f"{key} must be true or false", line_no,
                                        col + off + len(key) + 1)
                params[key] = val == "true"
        else:
            objects.append((word, col + off))
    lo, hi = TASK_KINDS[kind]
    if not lo <= len(objects) <= hi:
        raise ManifestError(f"task {kind} takes {lo} object(s), got {len(objects)}", line_no, col)
    return Task(kind, objects, params, line_no, col)


def parse_range(text: str):
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise ValueError(f"expected a range lo..hi, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def _names(st: Statement):
    out = [s.strip() for s in st.value.split(",")]
    if any(not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", s) for s in out):
        raise ManifestError(f"expected a comma-separated list of names, got {st.value!r}",
                            st.line, st.value_column)
    return out


def _ints(st: Statement):
    try:
        return [int(s) for s in st.value.split(",")]
    except ValueError:
        raise ManifestError(f"expected a comma-separated list of integers, got {st.value!r}",
                            st.line, st.value_column) from None


def _build_chart(block: Block) -> Chart:
    var_st = block.get("variables")
    variables = _names(var_st) if var_st else []
    pairs = []
    pst = block.get("pairs")
    if pst:
        for item in pst.value.split(","):
            a, sep, b = item.strip().partition(":")
            if not sep:
                raise ManifestError(f"pair {item.strip()!r} must look like z:zb", pst.line,
                                    pst.value_column)
            pairs.append((a.strip(), b.strip()))
    wst = block.get("weights")
    weights = _ints(wst) if wst else None
    for st in block.statements:
        if st.key not in ("variables", "pairs", "weights") or len(st.words) != 1:
            raise ManifestError(f"unknown chart key {st.key!r}", st.line, st.column)
    try:
        return Chart(tuple(variables), tuple(pairs), tuple(weights) if weights else None)
    except ValueError as exc:
        raise ManifestError(str(exc), block.line, block.column) from None


_REFERENCES = {
    "representation": ("on",),
    "matched_pair": ("a1", "a2", "nabla12", "nabla21"),
    "acs": ("on",),
}


def _check_references(m: Manifest):
    for block in m.blocks.values():
        for key in _REFERENCES.get(block.kind, ()):
            st = block.get(key)
            if st is not None and st.value not in m.blocks:
                raise ManifestError(f"dangling reference {st.value!r} in {block.kind} "
                                    f"{block.name}", st.line, st.value_column)
    for task in m.tasks:
        for name, col in task.objects:
            if name not in m.blocks:
                raise ManifestError(f"dangling reference {name!r} in task {task.kind}",
                                    task.line, col)


_POLY_KEYS = {"anchor", "bracket", "gamma", "coefficient", "j", "jm"}


def _check_polynomials(m: Manifest):
    """Parse every polynomial once so syntax errors surface with positions."""
    for block in m.blocks.values():
        chart = block_chart(m, block)
        for st in block.statements:
            if st.key in _POLY_KEYS:
                poly_value(chart, st)


def block_chart(m: Manifest, block: Block) -> Chart:
    """Lie algebras live over a point; everything else uses the manifest chart."""
    if block.kind == "model":
        kind = block.get("model")
        if kind is not None and kind.value == "lie_algebra":
            return Chart(())
    if block.kind in ("representation", "acs"):
        st = block.get("on")
        if st is not None and st.value in m.blocks:
            return block_chart(m, m.blocks[st.value])
    return m.chart if m.chart is not None else Chart(())


def poly_value(chart: Chart, st: Statement):
    try:
        return parse_poly(st.value, chart)
    except PolyParseError as exc:
        col = st.value_column + (exc.position or 0)
        raise ManifestError(f"bad polynomial: {exc.args[0]}", st.line, col) from None
    except ValueError as exc:
        raise ManifestError(f"bad polynomial: {exc}", st.line, st.value_column) from None


def bundled_manifests() -> list:
    """Names of the manifests shipped with the package."""
    root = resources.files("lialgebroid") / "manifests"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".manifest"))


def bundled_manifest_text(name: str) -> str:
    if not name.endswith(".manifest"):
        name += ".manifest"
    return (resources.files("lialgebroid") / "manifests" / name).read_text(encoding="utf-8")
