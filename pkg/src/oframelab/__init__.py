"""Numerical laboratory for operator frames between finite-dimensional
Banach-space models: certified operator norms, Auerbach bases, rank-one
splittings with partial-sum bounds, sequence-space factorizations, and
shrinking / boundedly-complete diagnostics."""

from .config import DEFAULT_SEED, RunConfig
from .spaces import (
    Functional,
    SpaceSpec,
    Vec,
    dual_norm,
    dual_space,
    haar_system,
    norm,
    pairing,
)
from .operators import (
    MatOperator,
    NormResult,
    RankOneOperator,
    adjoint,
    apply,
    as_matrix,
    compose,
    identity_operator,
    image_basis,
    op_norm,
    sum_operators,
    zero_operator,
)
from .auerbach import AuerbachBasis, auerbach_basis
from .frames import (
    BapCertificate,
    OFrame,
    TailProfile,
    bap_certificate,
    bc_profile,
    build_oframe,
    compose_frame,
    dual_frame,
    frame_constant,
    frame_partial_sum,
    shrinking_profile,
    split_rank_one,
    telescope,
)
from .seqspace import (
    Factorization,
    SeqNorm,
    factorize,
    t_norm,
    u_norm,
    unconditional_constant,
)

__version__ = "0.1.0"
