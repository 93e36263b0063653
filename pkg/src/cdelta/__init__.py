"""Exhaustive-search workbench for finite rings and CΔ decompositions."""

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    DecompositionWitness,
    PropertyReport,
    center,
    classify,
    decompose_element,
    delta_set,
    idempotents,
    is_cdelta,
    jacobson,
    nil_star,
    nilpotents,
    search,
    units,
)
from .constructors import (  # noqa: E402
    CentralParams,
    MatrixFamilyKind,
    corner_ring,
    dt_ring,
    frobenius,
    generalized_matrix,
    gf,
    group_ring,
    hst_ring,
    ideal_generated,
    lst_ring,
    matrix_ring,
    quotient_ring,
    skew_triangular,
    special_matrix_family,
    subring_generated,
    triangular_ring,
    trivial_extension,
)
from .dsl import build, parse_expression  # noqa: E402
from .errors import CDeltaError  # noqa: E402
from .ring import (  # noqa: E402
    FiniteRing,
    RingMap,
    Subset,
    check_isomorphism,
    direct_product,
    endomorphism_of,
    poly_quotient,
    table_ring,
    zn,
)
from .theorems import CATALOG, CheckResult, run_check, run_suite  # noqa: E402
