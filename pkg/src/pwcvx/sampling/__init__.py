"""Floating-point sampling oracle."""

from .kernels import BACKEND as KERNEL_BACKEND
from .oracle import (
    Counterexample,
    FdFail,
    FdPass,
    LimitEstimate,
    Pass,
    SampleConfig,
    SamplingError,
    Schedule,
    estimate_boundary_limit,
    evaluate_many,
    fd_gradient_check,
    midpoint_convexity_test,
)

__all__ = [
    "KERNEL_BACKEND",
    "Counterexample",
    "FdFail",
    "FdPass",
    "LimitEstimate",
    "Pass",
    "SampleConfig",
    "SamplingError",
    "Schedule",
    "estimate_boundary_limit",
    "evaluate_many",
    "fd_gradient_check",
    "midpoint_convexity_test",
]
