"""Locate the modulus k0 where I(k) = <L^-1 1, 1> changes sign."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateProfileError, DomainError, KernelNotSimpleError, NoThresholdError, NumericError
from .profiles import K_MAX, K_MIN, WaveFamily, omega_of_k
from .stability import compute_I

EXPAND_STEP = 0.05


@dataclass(frozen=True)
class ThresholdResult:
    family: WaveFamily
    L: float
    k0: float
    omega_at_k0: float
    bracket: tuple
    iterations: int

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "L": self.L,
            "k0": self.k0,
            "omega_at_k0": self.omega_at_k0,
            "bracket": list(self.bracket),
            "iterations": self.iterations,
        }


def _expand(f, lo, hi, f_lo, f_hi):
    # widen toward (0, 1) in fixed steps until the signs differ; a side stops
    # once it reaches the modulus limits or the wave degenerates there
    open_lo, open_hi = True, True
    while f_lo * f_hi > 0.0:
        if not (open_lo or open_hi):
            return False, lo, hi, f_lo, f_hi
        if open_lo:
            lo, f_lo, open_lo = _step(f, lo, f_lo, max(K_MIN, lo - EXPAND_STEP), lo > K_MIN)
            if f_lo * f_hi <= 0.0:
                break
        if open_hi:
            hi, f_hi, open_hi = _step(f, hi, f_hi, min(K_MAX, hi + EXPAND_STEP), hi < K_MAX)
    return True, lo, hi, f_lo, f_hi


def _step(f, k, fk, k_new, allowed):
    if not allowed:
        return k, fk, False
    try:
        return k_new, f(k_new), True
    except (DegenerateProfileError, KernelNotSimpleError, NumericError):
        return k, fk, False


def find_k0(family, L: float, k_lo: float = 0.3, k_hi: float = 0.99, N: int | None = None,
            tol: float = 1e-6) -> ThresholdResult:
    """Bisection on k -> I(k); every evaluation is a full Hill solve."""
    family = WaveFamily.parse(family)
    if not (0.0 < k_lo < k_hi < 1.0):
        raise DomainError(f"need 0 < k_lo < k_hi < 1, got ({k_lo}, {k_hi})")

    def f(k):
        return compute_I(family, L, k, N)

    lo, hi = k_lo, k_hi
    f_lo, f_hi = f(lo), f(hi)
    found, lo, hi, f_lo, f_hi = _expand(f, lo, hi, f_lo, f_hi)
    if not found:
        raise NoThresholdError(
            f"I(k) keeps one sign on [{lo:g}, {hi:g}] for {family.value} L={L:g} "
            f"(I={f_lo:.6g} at k={lo:g}, I={f_hi:.6g} at k={hi:g})"
        )
    it = 0
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        it += 1
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    k0 = 0.5 * (lo + hi)
    return ThresholdResult(family, float(L), k0, omega_of_k(family, L, k0), (lo, hi), it)


def sign_changes(family, L: float, ks=None, N: int | None = None) -> list:
    """Brackets (k_i, k_{i+1}) where I changes sign on a scan grid."""
    ks = np.linspace(0.01, 0.99, 100) if ks is None else np.asarray(ks, dtype=float)
    vals = [compute_I(family, L, k, N) for k in ks]
    return [(float(ks[i]), float(ks[i + 1])) for i in range(len(ks) - 1)
            if np.sign(vals[i]) != np.sign(vals[i + 1])]
