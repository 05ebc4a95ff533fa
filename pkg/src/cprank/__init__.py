"""Analysis of symmetric nonnegative matrices: double nonnegativity,
complete positivity certificates with cp-rank equal to rank, and the
graph and cone conditions that bound cp-rank when equality fails."""

from .cones import (
    ConeReport,
    Rank3RayDecision,
    decide_rank3_three_rays,
    extreme_columns,
    extreme_rays,
    few_rays_factor,
    nnls,
)
from .errors import (
    ComputationFailureError,
    CprankError,
    InvalidInputError,
    PreconditionError,
    UnsupportedRankError,
)
from .fixtures import (
    EXAMPLE_IDS,
    SoulesBasis,
    example_factor,
    example_matrix,
    random_dn,
    soules_basis,
    soules_cp,
)
from .graphcond import (
    CycleCheck,
    GraphShape,
    MatrixGraph,
    TriangleFreeResult,
    classify_graph,
    cycle_necessary,
    graph_of,
    kaykobad_factor,
    triangle_free_criterion,
)
from .matcore import (
    DEFAULT_TOL,
    DnVerdict,
    EigenDecomposition,
    PsdRank,
    SymmetricMatrix,
    Tolerances,
    as_symmetric,
    classify_dn,
    comparison_matrix,
    psd_rank,
    sym_eigen,
    unit_diagonal_scaling,
    zero_diagonal_indices,
)
from .nnq import (
    NnqSearchResult,
    NnqWitness,
    find_nnq_witness,
    is_nnq_gram,
    nnq_factor,
    nnq_invariance_check,
)
from .pipeline import (
    AnalysisConfig,
    AnalysisReport,
    StepRecord,
    analyze,
    matrix_to_text,
    read_matrix,
    write_report,
)
from .rotate import (
    EConeQuery,
    RotationPlan,
    RowSumData,
    boundary_witness,
    e_cone_threshold,
    householder_align,
    in_e_cone,
    orthant_rotation_search,
    random_orthogonal,
    rank2_factor,
    rowsum_condition,
    rowsum_factor,
    small_orthant_rotation,
)
from .srfactor import (
    CpCertificate,
    SrFactor,
    VerificationReport,
    connecting_orthogonal,
    make_certificate,
    sr_factor,
    verify_certificate,
)

__version__ = "0.1.0"
