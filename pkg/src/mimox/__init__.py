"""Degrees-of-freedom analysis toolkit for two-user MIMO X channels.

Bounds, integer stream allocation, aligned precoder synthesis, and numeric
feasibility verification, with a CLI front end (``mimox``).
"""

from .numerics import (
    DEFAULT_TOLERANCE,
    InvalidInputError,
    Rational,
    TolerancePolicy,
    format_rational,
    parse_rational,
)
from .channel import (
    AntennaConfig,
    ChannelSet,
    ExtendedChannelSet,
    RankProfile,
    acs_embed,
    extend_constant,
    extend_time_varying,
    generate_full_rank,
    generate_rank_deficient,
    generate_time_varying,
    reciprocal_channels,
)
from .subspace import (
    GsvdFactors,
    MessageBases,
    extended_message_bases,
    gsvd,
    mixer_stack_full_rank,
    null_steer_basis,
    overlap_pair_basis,
)
from .bounds import (
    DoFPoint,
    DofRegion,
    RegionConstraint,
    lp_max_weighted,
    x_outer_region,
    x_total_outer,
    x_total_outer_closed_form,
    z_outer_region,
    z_total_outer,
    z_total_outer_closed_form,
)
from .allocator import (
    AllocationResult,
    IlpProblem,
    MessageMask,
    SchemeDims,
    StreamAllocation,
    build_p0,
    build_p1,
    build_px12,
    build_px21,
    conjecture_probe,
    generic_dims,
    inner_region_bounds,
    solve_ilp,
    sweep_best,
)
from .closed_forms import (
    ClosedFormResult,
    UnsupportedShapeError,
    closed_form_X,
    closed_form_X21,
    closed_form_rank_deficient,
    cooperative_bound,
)
from .appendix_tables import closed_form_Z_appendix
from .synthesis import (
    FeasibilityError,
    InfeasibleAllocationError,
    PrecoderSet,
    ReceiverSet,
    SignalSpaceMatrix,
    VerificationReport,
    assemble_G,
    build_precoders,
    build_receivers,
    design,
    lemma16_check,
    reciprocal_transfer,
    verify_feasibility,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "DEFAULT_TOLERANCE",
    "InvalidInputError",
    "Rational",
    "TolerancePolicy",
    "format_rational",
    "parse_rational",
    "AntennaConfig",
    "ChannelSet",
    "ExtendedChannelSet",
    "RankProfile",
    "acs_embed",
    "extend_constant",
    "extend_time_varying",
    "generate_full_rank",
    "generate_rank_deficient",
    "generate_time_varying",
    "reciprocal_channels",
    "GsvdFactors",
    "MessageBases",
    "extended_message_bases",
    "gsvd",
    "mixer_stack_full_rank",
    "null_steer_basis",
    "overlap_pair_basis",
    "DoFPoint",
    "DofRegion",
    "RegionConstraint",
    "lp_max_weighted",
    "x_outer_region",
    "x_total_outer",
    "x_total_outer_closed_form",
    "z_outer_region",
    "z_total_outer",
    "z_total_outer_closed_form",
    "AllocationResult",
    "IlpProblem",
    "MessageMask",
    "SchemeDims",
    "StreamAllocation",
    "build_p0",
    "build_p1",
    "build_px12",
    "build_px21",
    "conjecture_probe",
    "generic_dims",
    "inner_region_bounds",
    "solve_ilp",
    "sweep_best",
    "ClosedFormResult",
    "UnsupportedShapeError",
    "closed_form_X",
    "closed_form_X21",
    "closed_form_rank_deficient",
    "cooperative_bound",
    "closed_form_Z_appendix",
    "FeasibilityError",
    "InfeasibleAllocationError",
    "PrecoderSet",
    "ReceiverSet",
    "SignalSpaceMatrix",
    "VerificationReport",
    "assemble_G",
    "build_precoders",
    "build_receivers",
    "design",
    "lemma16_check",
    "reciprocal_transfer",
    "verify_feasibility",
]
