"""Capacity-region bounds for finite-state compound Gaussian interference channels."""

from ._accel import backend
from .channel_model import CompoundChannel, DegradedChain, GainState, build_degraded_chain, canonicalize, from_joint
from .errors import (
    CgicError,
    InfeasibleError,
    InvalidDirectionError,
    InvalidInputError,
    InvariantViolation,
    NumericalDegeneracyError,
    PreconditionError,
    ResourceLimitError,
    SpecParseError,
    UnboundedError,
)

__version__ = "0.1.0"

__all__ = [
    "CompoundChannel",
    "DegradedChain",
    "GainState",
    "build_degraded_chain",
    "canonicalize",
    "from_joint",
    "backend",
    "CgicError",
    "InfeasibleError",
    "InvalidDirectionError",
    "InvalidInputError",
    "InvariantViolation",
    "NumericalDegeneracyError",
    "PreconditionError",
    "ResourceLimitError",
    "SpecParseError",
    "UnboundedError",
]
