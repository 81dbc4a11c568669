"""Tight wavelet frames from polynomial masks via sum-of-squares certificates and transfer-function realizations."""

from .boxspline import BoxSplineSpec, bound_L, boxspline_mask, sos_boxspline
from .certify import (
    AglerDecomposition,
    SosCertificate,
    agler_nonneg,
    certificate_from_agler,
    psd_factor,
    sos_product,
    sos_telescope,
    verify_sos,
)
from .errors import InternalConsistencyError, PreconditionError, TightFrameError, VerificationError
from .laurent import LaurentPoly, PolyMatrix, lp_conj_reflect, lp_eval, lp_mul
from .realize import Realization, build_realization, transfer_expand, trim_to_contractive
from .symmetry import (
    DilationSetup,
    PolyphaseVector,
    dyadic,
    grid_min,
    polyphase_merge,
    polyphase_split,
    qmf_check,
    setup_dilation,
    shift_action,
    subqmf_defect,
    sum_rules_check,
)
from .synth import (
    CompletionReport,
    FrameletSet,
    adjoint_polynomial,
    assemble_framelets,
    build_u0,
    frame_pipeline,
    isometry_complete,
    verify_uep,
)
from .univariate import SpectralFactor, fejer_riesz, univariate_tight_frame

__version__ = "0.1.0"

__all__ = [
    "AglerDecomposition",
    "BoxSplineSpec",
    "CompletionReport",
    "DilationSetup",
    "FrameletSet",
    "InternalConsistencyError",
    "LaurentPoly",
    "PolyMatrix",
    "PolyphaseVector",
    "PreconditionError",
    "Realization",
    "SosCertificate",
    "SpectralFactor",
    "TightFrameError",
    "VerificationError",
    "adjoint_polynomial",
    "agler_nonneg",
    "assemble_framelets",
    "bound_L",
    "boxspline_mask",
    "build_realization",
    "build_u0",
    "certificate_from_agler",
    "dyadic",
    "fejer_riesz",
    "frame_pipeline",
    "grid_min",
    "isometry_complete",
    "lp_conj_reflect",
    "lp_eval",
    "lp_mul",
    "polyphase_merge",
    "polyphase_split",
    "psd_factor",
    "qmf_check",
    "setup_dilation",
    "shift_action",
    "sos_boxspline",
    "sos_product",
    "sos_telescope",
    "subqmf_defect",
    "sum_rules_check",
    "transfer_expand",
    "trim_to_contractive",
    "univariate_tight_frame",
    "verify_sos",
    "verify_uep",
]
