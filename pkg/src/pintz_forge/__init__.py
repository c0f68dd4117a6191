"""Explicit mean-value lower bounds for the Mertens function and zeta zero exclusion."""

from .errors import (CancellationUnderflow, CheckpointCorrupt, ComputationError,
                     ConfigParseError, ConvergenceFailure, DomainError, IncompletePrimes,
                     InvalidParams, NoExclusion, PintzError, PreconditionError,
                     QuadratureFailure, TailDivergence, UsageError, YTooSmall)
from .extreal import ExtReal
from .inference import (ExclusionQuery, ExclusionResult, exclusion_check,
                        exclusion_region_beta, exclusion_region_gamma, pintz87_bound)
from .mobius import MertensScan, mean_abs, mertens_scan, mobius_segment, pointwise_upper_mean
from .theorem import BoundBreakdown, TheoremParams, calE, lower_bound, mean_lower_constant
from .zeta_bounds import (GrowthBound, f_at_zero, growth_bound_F, growth_bound_G,
                          verify_lemma_chain, zeta_spot)

__version__ = "0.1.0"

__all__ = [
    "BoundBreakdown", "CancellationUnderflow", "CheckpointCorrupt", "ComputationError",
    "ConfigParseError", "ConvergenceFailure", "DomainError", "ExclusionQuery",
    "ExclusionResult", "ExtReal", "GrowthBound", "IncompletePrimes", "InvalidParams",
    "MertensScan", "NoExclusion", "PintzError", "PreconditionError", "QuadratureFailure",
    "TailDivergence", "TheoremParams", "UsageError", "YTooSmall", "calE", "exclusion_check",
    "exclusion_region_beta", "exclusion_region_gamma", "f_at_zero", "growth_bound_F",
    "growth_bound_G", "lower_bound", "mean_abs", "mean_lower_constant", "mertens_scan",
    "mobius_segment", "pintz87_bound", "pointwise_upper_mean", "verify_lemma_chain",
    "zeta_spot",
]
