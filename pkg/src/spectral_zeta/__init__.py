"""Zeta-regularized invariants of sequences of spectral type and of their sums."""

from __future__ import annotations

from .applications import (
    EtaValue,
    dedekind_eta,
    det_circle_times_M,
    det_product,
    epstein_expansion,
    generalized_eta,
    kronecker_coefficient,
    log_det,
    torus_log_det,
)
from .errors import CrossCheckError, MissingDataError, PoleError, PrecisionError, SpectralZetaError, ValidationError
from .gammaseq import e_coeff, log_gamma_seq, r_k
from .invariants import LaurentExpansion, ZetaInvariants, gamma_to_heat, heat_to_gamma, laurent_at, zeta_invariants
from .oracle import zeta_continued, zeta_direct
from .seqcore import SequenceDescriptor, builtin, heat_function, load_descriptor, scale, sum_descriptor
from .sumzeta import plan_decomposition, regularized_log_product, sum_zeta_at_zero, sum_zeta_deriv_at_zero

__version__ = "0.1.0"

__all__ = [
    "CrossCheckError",
    "EtaValue",
    "LaurentExpansion",
    "MissingDataError",
    "PoleError",
    "PrecisionError",
    "SequenceDescriptor",
    "SpectralZetaError",
    "ValidationError",
    "ZetaInvariants",
    "builtin",
    "dedekind_eta",
    "det_circle_times_M",
    "det_product",
    "e_coeff",
    "epstein_expansion",
    "gamma_to_heat",
    "generalized_eta",
    "heat_function",
    "heat_to_gamma",
    "kronecker_coefficient",
    "laurent_at",
    "load_descriptor",
    "log_det",
    "log_gamma_seq",
    "plan_decomposition",
    "r_k",
    "regularized_log_product",
    "scale",
    "sum_descriptor",
    "sum_zeta_at_zero",
    "sum_zeta_deriv_at_zero",
    "torus_log_det",
    "zeta_continued",
    "zeta_direct",
    "zeta_invariants",
]
