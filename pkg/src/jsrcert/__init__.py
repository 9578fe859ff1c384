"""Exact, certificate-producing joint spectral radius computation for
finite sets of small integer matrices."""

from .algebraic import (
    FieldElement,
    IntPolynomial,
    NumberFieldContext,
    Ordering,
    RealAlgebraic,
    compare,
    field_join,
    isolate_real_roots,
    nth_root,
)
from .geometry import (
    Classification,
    ComplexVertex,
    HullKind,
    LinearProgram,
    Mode,
    VertexPolytope,
    classify_with_fallback,
    minkowski_norm,
    simplex_solve,
)
from .ipa import (
    IpaOptions,
    IpaResult,
    IpaStatus,
    run_ipa,
    verify_certificate,
)
from .matcore import (
    IntMatrix,
    MatrixFamily,
    Product,
    avg_sr_compare,
    char_poly,
    evaluate,
    frobenius_norm_sq,
    leading_eigenvector,
    spectral_radius,
    two_norm_sq,
)
from .reduce import (
    PairCode,
    canonical_key,
    decode,
    encode,
    enumerate_campaign,
    irreducible,
    quick_decide,
)
from .smp import CandidateSet, canonicalize_product, gripenberg_search

__version__ = "0.1.0"
