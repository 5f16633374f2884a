"""Spectral stability of periodic waves of the critical KdV and Gardner equations."""

from .errors import (
    AtThresholdError,
    ConsistencyError,
    ContractError,
    DegenerateProfileError,
    DomainError,
    KernelNotSimpleError,
    NoThresholdError,
    NumericError,
    RangeError,
    ResolutionError,
    WavespecError,
)
from .hill import HillData, HillOperatorSpec, periodic_quadrature, solve_hill
from .profiles import WaveFamily, WaveProfile, eval_phi, make_profile, omega_of_k, omega_to_k
from .spectral import check_profile
from .stability import StabilityReport, Verdict, analyze
from .threshold import ThresholdResult, find_k0

__version__ = "0.1.0"

__all__ = [
    "AtThresholdError", "ConsistencyError", "ContractError", "DegenerateProfileError",
    "DomainError", "KernelNotSimpleError", "NoThresholdError", "NumericError", "RangeError",
    "ResolutionError", "WavespecError", "HillData", "HillOperatorSpec", "periodic_quadrature",
    "solve_hill", "WaveFamily", "WaveProfile", "eval_phi", "make_profile", "omega_of_k",
    "omega_to_k", "check_profile", "StabilityReport", "Verdict", "analyze", "ThresholdResult",
    "find_k0",
]
