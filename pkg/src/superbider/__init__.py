"""Exact-arithmetic engine for centroids, super-biderivations and
commutative post-Lie products on Z-graded Lie superalgebras of Virasoro type.

Everything is computed over the rationals on finite truncation windows;
solution spaces are compared against closed-form families on an interior
slice where boundary truncation cannot interfere.
"""

from .catalog import (
    ALGEBRA_NAMES,
    MODULE_NAMES,
    CatalogEntry,
    CatalogKey,
    get_algebra,
    get_module,
    key,
    list_catalog,
)
from .core import (
    EVEN,
    ODD,
    AlgebraSpec,
    CheckReport,
    Element,
    FamilyInfo,
    GenId,
    ModuleSpec,
    Window,
    act,
    adjoint_module,
    bracket,
    check_module_axiom,
    check_super_jacobi,
    check_super_skew,
    element,
    window,
)
from .engine import (
    BiderQuery,
    BiderSpace,
    BiderSystem,
    CentroidSpace,
    MapUnknowns,
    PostLieObstruction,
    PostLieResult,
    build_bider_system,
    build_centroid_system,
    check_solutions,
    decompose,
    postlie_obstruction,
    solve_bider,
    solve_centroid,
    solve_postlie,
)
from .scalars import Q, rat, rat_str
from .solver import (
    RowReducer,
    SolutionSpace,
    SparseMatrix,
    contains,
    nullspace,
    project,
    rank,
    space_from_vectors,
)
from .verifier import (
    B_SAMPLES,
    CASE_IDS,
    CASES,
    TheoremCase,
    VerificationReport,
    get_case,
    verify,
    verify_all,
)

__version__ = "0.1.0"
