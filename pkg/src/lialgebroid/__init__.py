"""Exact computations with polynomial Lie algebroids on an affine chart.

Cochain complexes, representations, matched pairs and their double
complexes, Poisson structures and almost complex structures, with Betti
numbers computed per weight slice over Q(i).
"""
from .algebroid import (
    AlgebroidError,
    AlgebroidPresentation,
    Cochain,
    Section,
    bracket_sections,
    change_frame,
    check_homogeneity,
    differential,
    evaluate,
    validate_presentation,
    wedge,
)
from .coefficients import Chart, Poly, PolyParseError, Scalar, parse_poly
from .complex_struct import (
    AlmostComplexStructure,
    bidegree_split,
    complexified_presentation,
    filtration_slices,
    nijenhuis,
    split_complexified,
    standard_j,
    validate_acs,
)
from .homology import (
    BettiTable,
    ChainComplexSlice,
    CochainComplex,
    ComplexError,
    FilteredComplex,
    InhomogeneousError,
    betti,
    betti_range,
    degree_zero_kernel,
    spectral_pages,
)
from .manifest import ManifestError, parse_manifest
from .matched import (
    AnticommutationError,
    MatchedPairData,
    bowtie,
    check_matched,
    check_skew_holomorphic,
    double_complex,
    total_complex,
)
from .models import abelian, foliation_algebroid, heisenberg3, lie_algebra_point, sl2, tangent_algebroid
from .poisson import (
    LichnerowiczComplex,
    Multivector,
    PoissonBivector,
    bihamiltonian_check,
    bivector,
    cotangent_algebroid,
    jacobi_check,
    schouten,
    skew_pair,
    so3_bivector,
    tangential_poisson_algebroid,
)
from .representations import (
    Representation,
    adjoint_representation,
    exterior_power,
    trivial_representation,
    twisted_diff,
    validate_representation,
)
from .runner import Report, build_objects, run_tasks

__all__ = [
    "abelian",
    "adjoint_representation",
    "AlgebroidError",
    "AlgebroidPresentation",
    "AlmostComplexStructure",
    "AnticommutationError",
    "betti",
    "betti_range",
    "BettiTable",
    "bidegree_split",
    "bihamiltonian_check",
    "bivector",
    "bowtie",
    "bracket_sections",
    "build_objects",
    "ChainComplexSlice",
    "change_frame",
    "Chart",
    "check_homogeneity",
    "check_matched",
    "check_skew_holomorphic",
    "Cochain",
    "CochainComplex",
    "ComplexError",
    "complexified_presentation",
    "cotangent_algebroid",
    "degree_zero_kernel",
    "differential",
    "double_complex",
    "evaluate",
    "exterior_power",
    "FilteredComplex",
    "filtration_slices",
    "foliation_algebroid",
    "heisenberg3",
    "InhomogeneousError",
    "jacobi_check",
    "LichnerowiczComplex",
    "lie_algebra_point",
    "ManifestError",
    "MatchedPairData",
    "Multivector",
    "nijenhuis",
    "parse_manifest",
    "parse_poly",
    "PoissonBivector",
    "Poly",
    "PolyParseError",
    "Report",
    "Representation",
    "run_tasks",
    "Scalar",
    "schouten",
    "Section",
    "skew_pair",
    "sl2",
    "so3_bivector",
    "spectral_pages",
    "split_complexified",
    "standard_j",
    "tangent_algebroid",
    "tangential_poisson_algebroid",
    "total_complex",
    "trivial_representation",
    "twisted_diff",
    "validate_acs",
    "validate_presentation",
    "validate_representation",
    "wedge",
]

__version__ = "0.1.0"
