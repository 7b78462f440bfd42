"""Exact construction and verification of orthosymplectic sum decompositions."""

from .scalars import GaussianRational, gr
from .linalg import (
    ExactMatrix,
    RrefResult,
    Subspace,
    nullspace,
    rref,
    solve_membership,
    subspace_intersect,
    subspace_sum,
)
from .superalg import (
    BilinearFormSpec,
    GradedMatrix,
    Superalgebra,
    build_gl,
    build_orthogonal,
    build_osp,
    build_sl,
    build_symplectic,
    is_closed_subalgebra,
    superbracket,
)
from .structure import (
    StructureFingerprint,
    StructureReport,
    expected_osp_fingerprint,
    expected_sl_fingerprint,
    fingerprint,
    verify_osp_structure,
    verify_sl_structure,
)
from .decomp import (
    CandidatePair,
    DecompositionReport,
    ScreenVerdict,
    build_example_decomposition,
    conjugate_to_identity,
    enumerate_candidates,
    feasibility_screen,
    onishchik_sl,
    onishchik_sp,
    screen_survivors,
    verify_sum,
)
from .repmod import (
    ModuleAction,
    ModuleComponent,
    burnside_irreducible,
    classify_type,
    decompose_module,
    highest_weight,
    outer_tensor,
    projection_view,
    restrict_natural_action,
    tensor_square_decompose,
)
from .cli import main

__version__ = "0.1.0"

__all__ = [
    "GaussianRational",
    "gr",
    "ExactMatrix",
    "RrefResult",
    "Subspace",
    "nullspace",
    "rref",
    "solve_membership",
    "subspace_intersect",
    "subspace_sum",
    "BilinearFormSpec",
    "GradedMatrix",
    "Superalgebra",
    "build_gl",
    "build_orthogonal",
    "build_osp",
    "build_sl",
    "build_symplectic",
    "is_closed_subalgebra",
    "superbracket",
    "StructureFingerprint",
    "StructureReport",
    "expected_osp_fingerprint",
    "expected_sl_fingerprint",
    "fingerprint",
    "verify_osp_structure",
    "verify_sl_structure",
    "CandidatePair",
    "DecompositionReport",
    "ScreenVerdict",
    "build_example_decomposition",
    "conjugate_to_identity",
    "enumerate_candidates",
    "feasibility_screen",
    "onishchik_sl",
    "onishchik_sp",
    "screen_survivors",
    "verify_sum",
    "ModuleAction",
    "ModuleComponent",
    "burnside_irreducible",
    "classify_type",
    "decompose_module",
    "highest_weight",
    "outer_tensor",
    "projection_view",
    "restrict_natural_action",
    "tensor_square_decompose",
    "main",
    "__version__",
]
