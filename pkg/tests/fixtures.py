"""Fixture collections shared by several test modules."""
from __future__ import annotations

from functools import lru_cache

from lialgebroid import (
    AlgebroidPresentation,
    MatchedPairData,
    PoissonBivector,
    Representation,
    bowtie,
    cotangent_algebroid,
    jacobi_check,
    validate_presentation,
    validate_representation,
)
from lialgebroid.complex_struct import AlmostComplexStructure, complexified_presentation
from lialgebroid.manifest import bundled_manifest_text, bundled_manifests, parse_manifest
from lialgebroid.matched import dolbeault_chart, dolbeault_pair
from lialgebroid.models import abelian, foliation_algebroid, heisenberg3, sl2, tangent_algebroid
from lialgebroid.poisson import bivector, skew_pair, so3_bivector
from lialgebroid.representations import adjoint_representation, trivial_representation
from lialgebroid.runner import build_objects


@lru_cache(maxsize=None)
def bundled_objects() -> dict:
    out = {}
    for name in bundled_manifests():
        objs = build_objects(parse_manifest(bundled_manifest_text(name)))
        for key, obj in objs.items():
            out[f"{name}:{key}"] = obj
    return out


@lru_cache(maxsize=None)
def validated_algebroids() -> dict:
    """Every algebroid reachable from the bundled manifests and the library
    fixtures that passes validation."""
    found = {
        "tangent1": tangent_algebroid(1),
        "tangent3": tangent_algebroid(3),
        "foliation(1,2)": foliation_algebroid(1, 2).presentation,
        "sl2": sl2(),
        "heisenberg3": heisenberg3(),
        "abelian2": abelian(2),
        "cotangent(so3)": cotangent_algebroid(so3_bivector()),
        "bowtie(dolbeault2)": bowtie(dolbeault_pair(2)),
        "bowtie(skew z dz^dw)": bowtie(_linear_skew_pair()),
    }
    for key, obj in bundled_objects().items():
        if isinstance(obj, AlgebroidPresentation):
            found[key] = obj
        elif isinstance(obj, PoissonBivector) and jacobi_check(obj).ok:
            found[key + "[T*]"] = cotangent_algebroid(obj)
        elif isinstance(obj, MatchedPairData):
            found[key + "[bowtie]"] = bowtie(obj)
        elif isinstance(obj, AlmostComplexStructure):
            found[key + "[split]"] = complexified_presentation(obj)
    return {k: A for k, A in found.items() if validate_presentation(A).ok}


@lru_cache(maxsize=None)
def validated_representations() -> dict:
    s = sl2()
    found = {
        "ad(sl2)": adjoint_representation(s),
        "trivial(tangent2)": trivial_representation(tangent_algebroid(2), 2),
        "ad(heisenberg3)": adjoint_representation(heisenberg3()),
    }
    ch_pair = _linear_skew_pair()
    found["skew(z dz^dw).rep12"] = ch_pair.rep12
    found["skew(z dz^dw).rep21"] = ch_pair.rep21
    for key, obj in bundled_objects().items():
        if isinstance(obj, Representation):
            found[key] = obj
    return {k: R for k, R in found.items() if validate_representation(R).ok}


@lru_cache(maxsize=None)
def _linear_skew_pair():
    P = bivector(dolbeault_chart(2), {("z", "w"): "z"})
    return skew_pair(P, P)
