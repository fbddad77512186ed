"""Build manifest objects and run manifest tasks.

Each task produces records ``(task, object, key, value)`` where ``task`` is
``<ordinal>:<kind>``.  Verification tasks also produce a ``status`` record
(``pass`` or ``fail``); a task that raises is recorded as ``error`` and
counts as a failure without stopping later tasks.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from .algebroid import (
    AlgebroidPresentation,
    check_homogeneity,
    validate_presentation,
)
from .complex_struct import (
    AlmostComplexStructure,
    filtration_slices,
    nijenhuis,
    split_complexified,
    validate_acs,
)
from .homology import betti, betti_range, degree_zero_kernel
from .manifest import Block, Manifest, ManifestError, _ints, block_chart, poly_value
from .matched import (
    MatchedPairData,
    bowtie,
    check_matched,
    check_skew_holomorphic,
    double_complex,
    zero_actions,
)
from .models import (
    _coordinate_algebroid,
    abelian,
    foliation_algebroid,
    heisenberg3,
    sl2,
    tangent_algebroid,
)
from .poisson import (
    LichnerowiczComplex,
    PoissonBivector,
    bihamiltonian_check,
    cotangent_algebroid,
    jacobi_check,
    skew_pair,
)
from .representations import (
    Representation,
    adjoint_representation,
    trivial_representation,
    validate_representation,
)

log = logging.getLogger("lialgebroid")

DEFAULT_WEIGHTS = (-4, 4)
VERIFICATION_TASKS = {"verify", "verify-matched", "jacobi", "skew-pair", "bihamiltonian",
                      "total-betti"}


@dataclass
class Report:
    records: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, task, obj, key, value):
        self.records.append((task, obj, str(key), _fmt(value)))

    def tsv(self) -> str:
        return "".join("\t".join(_clean(f) for f in rec) + "\n" for rec in self.records)

    def table(self) -> str:
        lines = []
        last = None
        for task, obj, key, value in self.records:
            if task != last:
                lines.append(f"== {task} {obj}")
                last = task
            lines.append(f"   {key:<28} {value}")
        return "\n".join(lines) + ("\n" if lines else "")


def _clean(s):
    return s.replace("\t", " ").replace("\n", " ")


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, sort_keys=True, default=str)
    return str(v)


# --- object construction ------------------------------------------------------


class ObjectBuilder:
    def __init__(self, manifest: Manifest):
        self.m = manifest
        self.cache = {}

    def get(self, name):
        if name not in self.cache:
            block = self.m.blocks[name]
            build = getattr(self, "_" + block.kind)
            self.cache[name] = build(block)
        return self.cache[name]

    def build_all(self):
        for name in self.m.blocks:
            self.get(name)
        return self.cache

    # helpers

    def _chart(self, block):
        return block_chart(self.m, block)

    def _ref(self, block, key, kinds=None, required=True):
        st = block.get(key)
        if st is None:
            if required:
                raise ManifestError(f"{block.kind} {block.name} needs '{key}'", block.line,
                                    block.column)
            return None
        obj = self.get(st.value)
        if kinds is not None and not isinstance(obj, kinds):
            raise ManifestError(f"'{st.value}' has the wrong kind for '{key}'", st.line,
                                st.value_column)
        return obj

    def _known_keys(self, block, keys):
        for st in block.statements:
            if st.key not in keys:
                raise ManifestError(f"unknown key {st.key!r} in {block.kind} {block.name}",
                                    st.line, st.column)

    def _arity(self, st, n):
        if len(st.words) != n + 1:
            raise ManifestError(f"'{st.key}' takes {n} argument(s)", st.line, st.column)

    @staticmethod
    def _wrap(block, fn, *args):
        try:
            return fn(*args)
        except ManifestError:
            raise
        except (ValueError, KeyError, IndexError) as exc:
            raise ManifestError(f"cannot build {block.kind} {block.name}: {exc}", block.line,
                                block.column) from None

    def _generator_index(self, names, st, word):
        try:
            return names.index(word)
        except ValueError:
            raise ManifestError(f"unknown generator {word!r}", st.line, st.column) from None

    def _presentation_from_statements(self, block, chart, names, weights):
        anchor, brackets = {}, {}
        for st in block.all("anchor"):
            self._arity(st, 2)
            gen, var = st.words[1], st.words[2]
            self._generator_index(names, st, gen)
            if var not in chart.variables:
                raise ManifestError(f"unknown variable {var!r}", st.line, st.column)
            anchor.setdefault(gen, {})[var] = poly_value(chart, st)
        for st in block.all("bracket"):
            self._arity(st, 3)
            gi, gj, gk = st.words[1:]
            for g in (gi, gj, gk):
                self._generator_index(names, st, g)
            if gi == gj:
                raise ManifestError("a generator brackets to zero with itself", st.line, st.column)
            brackets.setdefault((gi, gj), {})[gk] = poly_value(chart, st)
        return self._wrap(block, AlgebroidPresentation.from_brackets, chart, names,
                          anchor or None, brackets, weights)

    # object kinds

    def _algebroid(self, block: Block):
        self._known_keys(block, {"generators", "weights", "anchor", "bracket"})
        chart = self._chart(block)
        gst = block.get("generators")
        if gst is None:
            raise ManifestError(f"algebroid {block.name} needs 'generators'", block.line,
                                block.column)
        names = [s.strip() for s in gst.value.split(",")]
        wst = block.get("weights")
        weights = _ints(wst) if wst else [0] * len(names)
        if len(weights) != len(names):
            raise ManifestError("one weight per generator required", wst.line, wst.value_column)
        return self._presentation_from_statements(block, chart, names, weights)

    def _model(self, block: Block):
        kind = block.get("model")
        if kind is None:
            raise ManifestError(f"model {block.name} needs 'model'", block.line, block.column)
        chart = self._chart(block)
        if kind.value == "tangent":
            self._known_keys(block, {"model", "variables"})
            vst = block.get("variables")
            if vst is None:
                return self._wrap(block, tangent_algebroid, chart)
            variables = [s.strip() for s in vst.value.split(",")]
            return self._wrap(block, _coordinate_algebroid, chart, variables)
        if kind.value == "foliation":
            self._known_keys(block, {"model", "leaves"})
            lst = block.get("leaves")
            if lst is None:
                raise ManifestError("foliation model needs 'leaves'", block.line, block.column)
            leaves = [s.strip() for s in lst.value.split(",")]
            return self._wrap(block, foliation_algebroid, chart, leaves).presentation
        if kind.value == "lie_algebra":
            self._known_keys(block, {"model", "preset", "rank", "generators", "bracket"})
            pst = block.get("preset")
            if pst is not None:
                presets = {"sl2": sl2, "heisenberg3": heisenberg3}
                if pst.value == "abelian":
                    rst = block.get("rank")
                    if rst is None or not rst.value.isdigit():
                        raise ManifestError("abelian preset needs an integer 'rank'",
                                            block.line, block.column)
                    return abelian(int(rst.value))
                if pst.value not in presets:
                    raise ManifestError(f"unknown preset {pst.value!r}", pst.line, pst.value_column)
                return presets[pst.value]()
            gst = block.get("generators")
            if gst is None:
                raise ManifestError("lie_algebra model needs 'generators' or 'preset'",
                                    block.line, block.column)
            names = [s.strip() for s in gst.value.split(",")]
            return self._presentation_from_statements(block, chart, names, [0] * len(names))
        raise ManifestError(f"unknown model {kind.value!r}", kind.line, kind.value_column)

    def _representation(self, block: Block):
        self._known_keys(block, {"on", "rank", "weights", "kind", "gamma"})
        A = self._ref(block, "on", AlgebroidPresentation)
        kst = block.get("kind")
        if kst is not None:
            if kst.value == "adjoint":
                return self._wrap(block, adjoint_representation, A)
            if kst.value == "trivial":
                rst = block.get("rank")
                return trivial_representation(A, _ints(rst)[0] if rst else 1)
            raise ManifestError(f"unknown representation kind {kst.value!r}", kst.line,
                                kst.value_column)
        rst = block.get("rank")
        if rst is None or not rst.value.isdigit():
            raise ManifestError("representation needs an integer 'rank'", block.line, block.column)
        m = int(rst.value)
        chart = A.chart
        gam = [[[0] * m for _ in range(m)] for _ in range(A.rank)]
        for st in block.all("gamma"):
            self._arity(st, 3)
            i = self._generator_index(list(A.names), st, st.words[1])
            try:
                a, b = int(st.words[2]) - 1, int(st.words[3]) - 1
            except ValueError:
                raise ManifestError("module indices are 1-based integers", st.line,
                                    st.column) from None
            if not (0 <= a < m and 0 <= b < m):
                raise ManifestError("module index out of range", st.line, st.column)
            gam[i][a][b] = poly_value(chart, st)
        wst = block.get("weights")
        weights = _ints(wst) if wst else None
        return self._wrap(block, Representation, A, m, gam, weights)

    def _matched_pair(self, block: Block):
        self._known_keys(block, {"a1", "a2", "nabla12", "nabla21"})
        a1 = self._ref(block, "a1", AlgebroidPresentation)
        a2 = self._ref(block, "a2", AlgebroidPresentation)
        r12 = self._ref(block, "nabla12", Representation, required=False)
        r21 = self._ref(block, "nabla21", Representation, required=False)
        zero = self._wrap(block, zero_actions, a1, a2)
        return self._wrap(block, MatchedPairData, a1, a2, r12 or zero.rep12, r21 or zero.rep21)

    def _poisson(self, block: Block):
        self._known_keys(block, {"coefficient"})
        chart = self._chart(block)
        coeffs = {}
        for st in block.all("coefficient"):
            self._arity(st, 2)
            a, b = st.words[1:]
            for v in (a, b):
                if v not in chart.variables:
                    raise ManifestError(f"unknown variable {v!r}", st.line, st.column)
            coeffs[(a, b)] = poly_value(chart, st)
        return self._wrap(block, PoissonBivector, chart, coeffs)

    def _acs(self, block: Block):
        self._known_keys(block, {"on", "j", "jm"})
        A = self._ref(block, "on", AlgebroidPresentation)
        chart = A.chart
        J = [[0] * A.rank for _ in range(A.rank)]
        JM = [[0] * chart.nvars for _ in range(chart.nvars)]
        for st in block.all("j"):
            self._arity(st, 2)
            r = self._generator_index(list(A.names), st, st.words[1])
            c = self._generator_index(list(A.names), st, st.words[2])
            J[r][c] = poly_value(chart, st)
        for st in block.all("jm"):
            self._arity(st, 2)
            try:
                r, c = chart.index(st.words[1]), chart.index(st.words[2])
            except ValueError:
                raise ManifestError("unknown variable in jm", st.line, st.column) from None
            JM[r][c] = poly_value(chart, st)
        return self._wrap(block, AlmostComplexStructure, A, J, JM)


def build_objects(manifest: Manifest) -> dict:
    return ObjectBuilder(manifest).build_all()


# --- tasks --------------------------------------------------------------------


@dataclass
class RunOptions:
    weights: tuple = DEFAULT_WEIGHTS
    max_degree: int | None = None
    threads: int = 1


def _weights(task, opts):
    lo, hi = task.params.get("weights", opts.weights)
    return list(range(lo, hi + 1))


def _max_degree(task, opts):
    return task.params.get("max-degree", opts.max_degree)


def _betti_rows(report, label, obj, tables, max_degree, prefix="betti"):
    for t in tables:
        for k, b in t.entries:
            if max_degree is not None and k > max_degree:
                continue
            report.add(label, obj, f"{prefix}[w={t.weight},k={k}]", b)


def _betti_tables(target, weights, opts, max_degree):
    # one extra degree so that the reported top degree is still a cohomology group
    md = None if max_degree is None else max_degree + 1
    return betti_range(target, weights, threads=opts.threads, max_degree=md)


def _as_algebroid(obj):
    if isinstance(obj, AlgebroidPresentation):
        return obj
    if isinstance(obj, PoissonBivector):
        return cotangent_algebroid(obj)
    if isinstance(obj, MatchedPairData):
        return bowtie(obj)
    raise TypeError(f"expected an algebroid, got {type(obj).__name__}")


class TaskRunner:
    def __init__(self, manifest: Manifest, objects: dict, opts: RunOptions):
        self.m = manifest
        self.objects = objects
        self.opts = opts

    def run(self) -> Report:
        report = Report()
        for n, task in enumerate(self.m.tasks, start=1):
            label = f"{n}:{task.kind}"
            names = [name for name, _ in task.objects]
            obj_label = ",".join(names)
            log.info("running %s on %s", label, obj_label)
            start = len(report.records)
            try:
                handler = getattr(self, "task_" + task.kind.replace("-", "_"))
                ok = handler(report, label, obj_label, task, [self.objects[x] for x in names])
            except Exception as exc:  # task errors are captured, siblings still run
                del report.records[start:]
                report.add(label, obj_label, "error", f"{type(exc).__name__}: {exc}")
                report.add(label, obj_label, "status", "error")
                report.failures.append(label)
                continue
            if task.kind in VERIFICATION_TASKS:
                report.add(label, obj_label, "status", "pass" if ok else "fail")
                if not ok:
                    report.failures.append(label)
        return report

    def task_verify(self, report, label, name, task, objs):
        (obj,) = objs
        if isinstance(obj, AlgebroidPresentation):
            rep = validate_presentation(obj)
            report.add(label, name, "anchor_homomorphism", rep.anchor_homomorphism)
            report.add(label, name, "jacobi", rep.jacobi)
            report.add(label, name, "leibniz", rep.leibniz)
            hom = check_homogeneity(obj)
            report.add(label, name, "homogeneous", hom.ok)
            if rep.witness:
                report.add(label, name, "witness", rep.witness)
            if hom.witness:
                report.add(label, name, "weight_witness", hom.witness)
            return rep.ok
        if isinstance(obj, Representation):
            rep = validate_representation(obj)
            report.add(label, name, "flat", rep.ok)
            if rep.witness:
                report.add(label, name, "witness", rep.witness)
            return rep.ok
        if isinstance(obj, AlmostComplexStructure):
            rep = validate_acs(obj)
            report.add(label, name, "square", rep.square)
            report.add(label, name, "compatible", rep.compatible)
            if rep.witness:
                report.add(label, name, "witness", rep.witness)
            return rep.ok
        if isinstance(obj, PoissonBivector):
            return self.task_jacobi(report, label, name, task, objs)
        if isinstance(obj, MatchedPairData):
            return self.task_verify_matched(report, label, name, task, objs)
        raise TypeError(f"cannot verify {type(obj).__name__}")

    def task_verify_matched(self, report, label, name, task, objs):
        (M,) = objs
        rep = check_matched(M)
        report.add(label, name, "matched", rep.ok)
        if rep.witness:
            report.add(label, name, "condition", rep.condition)
            report.add(label, name, "witness", rep.witness)
        return rep.ok

    def task_betti(self, report, label, name, task, objs):
        (obj,) = objs
        target = obj if isinstance(obj, Representation) else _as_algebroid(obj)
        md = _max_degree(task, self.opts)
        _betti_rows(report, label, name, _betti_tables(target, _weights(task, self.opts),
                                                       self.opts, md), md)
        return True

    def task_total_betti(self, report, label, name, task, objs):
        (M,) = objs
        md = _max_degree(task, self.opts)
        ok = True
        B = bowtie(M)
        weights = _weights(task, self.opts)
        bow = {t.weight: t for t in _betti_tables(B, weights, self.opts, md)}
        for w in weights:
            tot = betti(double_complex(M, w).total())
            _betti_rows(report, label, name, [tot], md, "total")
            _betti_rows(report, label, name, [bow[w]], md, "bowtie")
            same = [b for k, b in tot.entries if md is None or k <= md] == \
                   [b for k, b in bow[w].entries if md is None or k <= md]
            report.add(label, name, f"agree[w={w}]", same)
            ok = ok and same
        return ok

    def task_spectral(self, report, label, name, task, objs):
        (obj,) = objs
        pages = task.params.get("pages", 2)
        for w in _weights(task, self.opts):
            if isinstance(obj, MatchedPairData):
                filtered = double_complex(obj, w).filtered_total()
            elif isinstance(obj, AlmostComplexStructure):
                filtered = filtration_slices(obj, w)
            else:
                raise TypeError("spectral needs a matched pair or an almost complex structure")
            tot = betti(filtered.complex)
            for page in filtered.pages(pages):
                for (p, q) in sorted(page.table):
                    report.add(label, name, f"E{page.index}[w={w},p={p},q={q}]", page.table[(p, q)])
            report.add(label, name, f"betti[w={w}]", list(tot.numbers))
        return True

    def task_nijenhuis(self, report, label, name, task, objs):
        (S,) = objs
        rep = nijenhuis(S)
        report.add(label, name, "integrable", rep.ok)
        for (a, b), N in rep.values.items():
            if not N.is_zero():
                report.add(label, name, f"N({a},{b})", [str(c) for c in N.coeffs])
        return True

    def task_split(self, report, label, name, task, objs):
        (S,) = objs
        frames = split_complexified(S)
        for k, v in enumerate(frames.holomorphic):
            report.add(label, name, f"A10[{k}]", [str(c) for c in v])
        for k, v in enumerate(frames.antiholomorphic):
            report.add(label, name, f"A01[{k}]", [str(c) for c in v])
        return True

    def task_jacobi(self, report, label, name, task, objs):
        (P,) = objs
        rep = jacobi_check(P)
        report.add(label, name, "poisson", rep.ok)
        if rep.witness is not None:
            report.add(label, name, "witness", str(rep.witness))
        return rep.ok

    def task_lichnerowicz_betti(self, report, label, name, task, objs):
        (P,) = objs
        md = _max_degree(task, self.opts)
        cx = LichnerowiczComplex(P, max_degree=None if md is None else md + 1)
        tables = betti_range(cx, _weights(task, self.opts), threads=self.opts.threads)
        _betti_rows(report, label, name, tables, md)
        return True

    def task_casimirs(self, report, label, name, task, objs):
        (obj,) = objs
        A = _as_algebroid(obj)
        for w in _weights(task, self.opts):
            ker = degree_zero_kernel(A, w)
            report.add(label, name, f"dim[w={w}]", len(ker))
            for k, xi in enumerate(ker):
                report.add(label, name, f"casimir[w={w},{k}]", str(xi.coefficient(())))
        return True

    def task_skew_pair(self, report, label, name, task, objs):
        P1, P2 = objs
        M = skew_pair(P1, P2, tangential=task.params.get("tangential", False))
        rep = check_matched(M)
        hol = check_skew_holomorphic(M)
        bih = bihamiltonian_check(P1, P2)
        report.add(label, name, "matched", rep.ok)
        report.add(label, name, "skew_holomorphic", hol.ok)
        report.add(label, name, "bihamiltonian", bih.ok)
        if rep.witness:
            report.add(label, name, "witness", rep.witness)
        return rep.ok and hol.ok and bih.ok

    def task_bihamiltonian(self, report, label, name, task, objs):
        P1, P2 = objs
        rep = bihamiltonian_check(P1, P2)
        report.add(label, name, "bihamiltonian", rep.ok)
        if rep.witness is not None:
            report.add(label, name, "witness", str(rep.witness))
        return rep.ok


def run_tasks(manifest: Manifest, opts: RunOptions | None = None, objects=None) -> Report:
    """Execute the manifest's tasks in declaration order."""
    opts = opts or RunOptions()
    if objects is None:
        objects = build_objects(manifest)
    return TaskRunner(manifest, objects, opts).run()
