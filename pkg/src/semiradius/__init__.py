"""Finite-dimensional toolkit for operator geometry under a PSD weight.

Build a weight, bind operators to it, and compute the seminorm gauges
the weight induces: operator seminorm, numerical radius, Crawford
number, spectral radius.  Certify orthogonality and parallelism
relations with signed margins, verify block-matrix radius inequalities,
and fuzz the whole battery deterministically.
"""

from .blockmat import (
    BlockCheckReport,
    BlockOperator,
    block_a_adjoint,
    build_block,
    check_block_adjoint,
    check_crawford_bound,
    check_parallel_equality,
    check_phase_invariance,
    check_pinch,
    check_sandwich,
    check_triangular,
    inflate_weight,
)
from .certify import (
    CertifyConfig,
    Verdict,
    bj_orthogonal,
    norm_parallel,
    norm_parallel_crosscheck,
    normaloid_bridge_check,
    vec_parallel,
    wa_ortho_crosscheck,
    wa_orthogonal,
    wa_parallel,
    wa_parallel_crosscheck,
)
from .errors import (
    ANullVector,
    BadRank,
    ContextMismatch,
    DimensionMismatch,
    NotAAdjointable,
    NotABounded,
    NotHermitian,
    NotPSD,
    NotUpperTriangular,
    PreconditionNotParallel,
    SchemaError,
    SemiradiusError,
    UnknownCheckName,
    ZeroRank,
    ZeroWeight,
)
from .gauges import (
    RangeProfile,
    SweepConfig,
    a_crawford,
    a_numerical_radius,
    a_opnorm,
    a_spectral_radius,
    is_a_normaloid,
    numerical_range_polygon,
)
from .genfuzz import (
    CampaignReport,
    GenConfig,
    gen_a_unitary,
    gen_adjointable,
    gen_orthogonal_pair,
    gen_parallel_pair,
    gen_weight,
    run_campaign,
)
from .rankone import ARankOne, make_rank_one, rank_one_adjoint, rank_one_norm, rank_one_radius
from .semiop import (
    SemiOperator,
    TildeLift,
    a_adjoint,
    a_unitary_from_unitary,
    is_a_positive,
    is_a_selfadjoint,
    is_a_unitary,
    operator_from_lift,
    tilde,
    wrap,
)
from .weightspace import AVector, Weight, a_inner, a_norm, a_normalize, build_weight

__version__ = "0.1.0"
