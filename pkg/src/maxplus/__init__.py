"""Exact max-plus (tropical) linear algebra and feasibility analysis.

The package decides whether a fully actuated event system subject to
time-window constraints admits consistent schedules, synthesizes finite
schedules, and computes the maximal controlled-invariant subsemimodule of
the induced precedence constraint set.  All arithmetic is exact (rationals
plus the two infinities), so every verdict is a certificate, not an
approximation.
"""

from .semiring import (
    NEG_INF,
    POS_INF,
    Scalar,
    as_scalar,
    format_scalar,
    is_finite,
    oplus,
    otimes,
    parse_scalar,
)
from .matrix import (
    DimensionMismatch,
    NotSquare,
    NotStarMatrix,
    TropicalMatrix,
    image_equal,
    image_member,
)
from .precedence import (
    BlockDimensionMismatch,
    BlockMatrixSpec,
    PrecedenceSystem,
    build_block_matrix,
    export_dot,
    finite_weak_feasibility,
    solve_precedence,
)
from .pteg import (
    ConsistencyKind,
    ConsistencyVerdict,
    InfeasibleHorizon,
    PtegSystem,
    Trajectory,
    check_consistency,
    closure_sequence,
    default_probe_bound,
    synthesize_trajectory,
    validate_trajectory,
)
from .invariance import (
    InvarianceKind,
    InvarianceReport,
    LiftedSystem,
    invariant_member,
    iterate_shrink,
    lift_system,
    maximal_invariant,
    roundtrip_closure,
    shrink_generator,
    shrink_generator_unrolled,
)
from .problems import (
    ProblemFile,
    ProblemFormatError,
    parse_problem,
    parse_problem_file,
    serialize_problem,
)

__version__ = "0.1.0"

__all__ = [
    "NEG_INF",
    "POS_INF",
    "Scalar",
    "as_scalar",
    "format_scalar",
    "is_finite",
    "oplus",
    "otimes",
    "parse_scalar",
    "DimensionMismatch",
    "NotSquare",
    "NotStarMatrix",
    "TropicalMatrix",
    "image_equal",
    "image_member",
    "BlockDimensionMismatch",
    "BlockMatrixSpec",
    "PrecedenceSystem",
    "build_block_matrix",
    "export_dot",
    "finite_weak_feasibility",
    "solve_precedence",
    "ConsistencyKind",
    "ConsistencyVerdict",
    "InfeasibleHorizon",
    "PtegSystem",
    "Trajectory",
    "check_consistency",
    "closure_sequence",
    "default_probe_bound",
    "synthesize_trajectory",
    "validate_trajectory",
    "InvarianceKind",
    "InvarianceReport",
    "LiftedSystem",
    "invariant_member",
    "iterate_shrink",
    "lift_system",
    "maximal_invariant",
    "roundtrip_closure",
    "shrink_generator",
    "shrink_generator_unrolled",
    "ProblemFile",
    "ProblemFormatError",
    "parse_problem",
    "parse_problem_file",
    "serialize_problem",
    "__version__",
]
