"""Covering integer programs with column restrictions and priorities.

Exact and approximate solvers for priority line and tree cover, an
LP-rounding pipeline for column-restricted covering programs driven by
knapsack-cover inequalities, reductions between the models, benchmark
generators, and brute-force ground truth for testing.
"""

from .errors import (
    AssumptionViolated,
    BudgetExceeded,
    CertificateViolated,
    DimensionMismatch,
    FractionalInfeasible,
    Infeasible,
    IterationBudgetExceeded,
    NonIntegralVertex,
    PriocoverError,
    ValidationError,
)
from .model import (
    UNBOUNDED,
    Box,
    ColumnRestrictedCIP,
    CoverReport,
    FracSolution,
    IntSolution,
    LineInstance,
    PriorityCIP,
    RectCoverInstance,
    Segment,
    TreeInstance,
    TreeSegment,
    TwoPriorityLineInstance,
    TwoPrioritySegment,
    ZeroOneCIP,
    check_cover,
    effective_system,
    is_unbounded,
    line_to_pcip,
    solution_cost,
    validate_instance,
)
from .lp import (
    AlphaRelaxed,
    LinearProgram,
    LpInfeasible,
    LpOptimal,
    LpRow,
    LpUnbounded,
    alpha_relaxed,
    canonical_relaxation,
    kc_residual,
    simplex_solve,
)
from .plc import (
    DualCertificate,
    exact_plc,
    gen_gap_line,
    interval_optima,
    primal_dual_plc,
)
from .ptc import (
    BroomSpec,
    LeafPathDecomposition,
    PathPartitionCertificate,
    PathPiece,
    TreeApxAudit,
    decompose_fractional_ptc,
    exact_tree_cover_01,
    gen_broom,
    leaf_path_decomposition,
    pair_cover_lp_value,
    path_partition_certificate,
    ptc_2apx,
    unweighted_ptc_round,
)
from .rounding import (
    RoundingAudit,
    round_ccip,
    round_no_kc,
)
from .reductions import (
    DfsOrders,
    cover_relation,
    dfs_orders,
    ptc_to_2plc,
    twoplc_to_rect,
)
from .oracles import (
    PrimalDualPcipOracle,
    TuLineOracle,
    brute_force_opt,
)
from .io import (
    DOCUMENT_VERSION,
    Document,
    SolutionPayload,
    document_for,
    parse_document,
    serialize_document,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaRelaxed",
    "AssumptionViolated",
    "Box",
    "BroomSpec",
    "BudgetExceeded",
    "CertificateViolated",
    "ColumnRestrictedCIP",
    "CoverReport",
    "DfsOrders",
    "DimensionMismatch",
    "Document",
    "DOCUMENT_VERSION",
    "DualCertificate",
    "FracSolution",
    "FractionalInfeasible",
    "Infeasible",
    "IntSolution",
    "IterationBudgetExceeded",
    "LeafPathDecomposition",
    "LineInstance",
    "LinearProgram",
    "LpInfeasible",
    "LpOptimal",
    "LpRow",
    "LpUnbounded",
    "NonIntegralVertex",
    "PathPartitionCertificate",
    "PathPiece",
    "PriocoverError",
    "PrimalDualPcipOracle",
    "PriorityCIP",
    "RectCoverInstance",
    "RoundingAudit",
    "Segment",
    "SolutionPayload",
    "TreeApxAudit",
    "TreeInstance",
    "TreeSegment",
    "TuLineOracle",
    "TwoPriorityLineInstance",
    "TwoPrioritySegment",
    "UNBOUNDED",
    "ValidationError",
    "ZeroOneCIP",
    "alpha_relaxed",
    "brute_force_opt",
    "canonical_relaxation",
    "check_cover",
    "cover_relation",
    "decompose_fractional_ptc",
    "dfs_orders",
    "document_for",
    "effective_system",
    "exact_plc",
    "exact_tree_cover_01",
    "gen_broom",
    "gen_gap_line",
    "interval_optima",
    "is_unbounded",
    "kc_residual",
    "leaf_path_decomposition",
    "line_to_pcip",
    "pair_cover_lp_value",
    "parse_document",
    "path_partition_certificate",
    "primal_dual_plc",
    "ptc_2apx",
    "ptc_to_2plc",
    "round_ccip",
    "round_no_kc",
    "serialize_document",
    "simplex_solve",
    "solution_cost",
    "twoplc_to_rect",
    "unweighted_ptc_round",
    "validate_instance",
]
