"""Explicit periodic traveling waves of the critical KdV and Gardner equations.

Each family is parametrized by the period ``L`` and the elliptic modulus
``k``; the profile solves

    -phi'' + omega * phi - g(phi) = A

on [0, L] with g(s) = s^5 (critical KdV, A = 0) or g(s) = s^2 + s^3
(Gardner, A = A(k)).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError, RangeError
from .special import complete_E, complete_K, jacobi

K_MIN = 1e-6
K_MAX = 1.0 - 1e-6


class WaveFamily(enum.Enum):
    CKDV_DNOIDAL = "ckdv-dnoidal"
    CKDV_CNOIDAL = "ckdv-cnoidal"
    GARDNER_CNOIDAL = "gardner"

    @classmethod
    def parse(cls, value) -> "WaveFamily":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            pass
        try:
            return cls[str(value).upper().replace("-", "_")]
        except KeyError:
            names = ", ".join(f.value for f in cls)
            raise DomainError(f"unknown family {value!r}; expected one of {names}") from None

    @property
    def is_critical_kdv(self) -> bool:
        return self is not WaveFamily.GARDNER_CNOIDAL

    @property
    def n_expected(self) -> int:
        """Number of negative eigenvalues of the linearized operator."""
        return 1 if self is WaveFamily.CKDV_DNOIDAL else 2

    def g(self, s):
        if self.is_critical_kdv:
            return s**5
        return s * s + s**3

    def gprime(self, s):
        if self.is_critical_kdv:
            return 5.0 * s**4
        return 2.0 * s + 3.0 * s * s


@dataclass(frozen=True)
class WaveProfile:
    family: WaveFamily
    L: float
    k: float
    a: float | None
    b: float
    omega: float
    A: float

    @property
    def K(self) -> float:
        return complete_K(self.k)

    @property
    def scale(self) -> float:
        """Factor mapping x to the Jacobi argument (2K/L or 4K/L)."""
        factor = 2.0 if self.family is WaveFamily.CKDV_DNOIDAL else 4.0
        return factor * self.K / self.L

    def __call__(self, x):
        return eval_phi(self, x)

    def potential(self, x):
        """Hill potential q(x) = omega - g'(phi(x))."""
        phi, _, _ = eval_phi(self, x)
        return self.omega - self.family.gprime(phi)


def _s(k: float) -> float:
    return math.sqrt(k**4 - k * k + 1.0)


def omega_of_k(family, L: float, k: float) -> float:
    family = WaveFamily.parse(family)
    K = complete_K(k)
    if family is WaveFamily.CKDV_DNOIDAL:
        return 4.0 * K * K * _s(k) / L**2
    if family is WaveFamily.CKDV_CNOIDAL:
        return 16.0 * K * K * _s(k) / L**2
    return -1.0 / 3.0 - 16.0 * K * K * (1.0 - 2.0 * k * k) / L**2


def gardner_A_of_k(L: float, k: float) -> float:
    K = complete_K(k)
    return 1.0 / 27.0 + 144.0 * K * K * (1.0 - 2.0 * k * k) / (27.0 * L**2)


def make_profile(family, L: float, k: float) -> WaveProfile:
    family = WaveFamily.parse(family)
    L, k = float(L), float(k)
    if not (L > 0.0 and math.isfinite(L)):
        raise DomainError(f"period must be positive and finite, got {L!r}")
    if not (0.0 < k < 1.0):
        raise DomainError(f"modulus must lie in (0, 1), got {k!r}")
    K = complete_K(k)
    s = _s(k)
    omega = omega_of_k(family, L, k)
    if family is WaveFamily.CKDV_DNOIDAL:
        a = (4.0 * (2.0 * k * k - 1.0 + 2.0 * s) * K * K * L * L) ** 0.25 / L
        b = 1.0 - k * k - s
        A = 0.0
    elif family is WaveFamily.CKDV_CNOIDAL:
        a = 2.0 * ((2.0 - k * k + 2.0 * s) * K * K * L * L) ** 0.25 / L
        b = -1.0 + k * k - s
        A = 0.0
    else:
        a = None
        b = 4.0 * math.sqrt(2.0) * k * K / L
        A = gardner_A_of_k(L, k)
    vals = [omega, b, A] + ([a] if a is not None else [])
    if not all(math.isfinite(v) for v in vals):
        raise NumericError(f"non-finite wave parameters for {family.value} L={L} k={k}")
    return WaveProfile(family, L, k, a, b, omega, A)


def eval_phi(p: WaveProfile, x):
    """Return (phi, phi', phi'') at ``x`` (scalar or array).

    phi' comes from differentiating the elliptic expression; phi'' is read
    off the profile equation.
    """
    x = np.asarray(x, dtype=float)
    c = p.scale
    sn, cn, dn = jacobi(c * x, p.k)
    fam = p.family
    if fam is WaveFamily.GARDNER_CNOIDAL:
        phi = -1.0 / 3.0 + p.b * cn
        dphi = -p.b * c * sn * dn
    else:
        den = 1.0 - p.b * sn * sn
        if fam is WaveFamily.CKDV_DNOIDAL:
            phi = p.a * dn / np.sqrt(den)
            dphi = p.a * c * sn * cn * (p.b - p.k**2) / den**1.5
        else:
            phi = p.a * cn / np.sqrt(den)
            dphi = p.a * c * sn * dn * (p.b - 1.0) / den**1.5
    d2phi = p.omega * phi - fam.g(phi) - p.A
    if np.ndim(phi) == 0:
        return float(phi), float(dphi), float(d2phi)
    return phi, dphi, d2phi


def mkdv_shift(p: WaveProfile):
    """Galilean data of a Gardner wave: phi + 1/3 solves -u'' + (omega + 1/3) u - u^3 = 0."""
    if p.family is not WaveFamily.GARDNER_CNOIDAL:
        raise DomainError("Galilean shift only applies to the Gardner family")
    return 1.0 / 3.0, p.omega + 1.0 / 3.0


def mkdv_potential(p: WaveProfile, x):
    """Hill potential of the shifted mKdV wave, (omega + 1/3) - 3 (phi + 1/3)^2."""
    shift, c = mkdv_shift(p)
    phi, _, _ = eval_phi(p, x)
    u = phi + shift
    return c - 3.0 * u * u


def omega_range(family, L: float) -> tuple[float, float]:
    """Open interval of admissible wave speeds (k -> 0+, k -> 1-)."""
    family = WaveFamily.parse(family)
    lo = {
        WaveFamily.CKDV_DNOIDAL: math.pi**2 / L**2,
        WaveFamily.CKDV_CNOIDAL: 4.0 * math.pi**2 / L**2,
        WaveFamily.GARDNER_CNOIDAL: -1.0 / 3.0 - 4.0 * math.pi**2 / L**2,
    }[family]
    return lo, math.inf


def omega_to_k(family, L: float, omega: float, tol: float = 1e-12) -> float:
    """Invert omega(k) by bisection; omega is strictly increasing in k."""
    family = WaveFamily.parse(family)
    lo_w, hi_w = omega_range(family, L)
    if not (lo_w < omega < hi_w):
        raise RangeError(
            f"omega={omega!r} outside the admissible interval ({lo_w!r}, inf) for {family.value} L={L}",
            interval=(lo_w, hi_w),
        )
    lo, hi = 0.0, 0.5
    while omega_of_k(family, L, hi) < omega:
        lo = hi
        hi = 0.5 * (1.0 + hi)
        if hi >= 1.0 - 1e-15:
            raise RangeError(f"omega={omega!r} beyond resolvable moduli for {family.value}",
                             interval=(lo_w, hi_w))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if omega_of_k(family, L, mid) < omega:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def derivative5(f, k: float, h: float) -> float:
    """Five-point centered difference, exact for quartics."""
    return (f(k - 2 * h) - 8.0 * f(k - h) + 8.0 * f(k + h) - f(k + 2 * h)) / (12.0 * h)


def _fd_step(k: float) -> float:
    return min(1e-3, 0.02 * min(k, 1.0 - k))


def domega_dk(family, L: float, k: float) -> float:
    family = WaveFamily.parse(family)
    if family.is_critical_kdv and k < 1e-3:
        # K^2 sqrt(k^4 - k^2 + 1) = (pi^2/4)(1 + 15 k^4/32 + O(k^6)); differences
        # of omega are below rounding here
        return 15.0 / 8.0 * omega_of_k(family, L, 0.0) * k**3
    if k < 1e-2 or family is WaveFamily.CKDV_DNOIDAL:
        # no closed form printed for the dnoidal curve, and the cnoidal ones
        # cancel to O(k^2) near k = 0
        return derivative5(lambda t: omega_of_k(family, L, t), k, _fd_step(k))
    K, E = complete_K(k), complete_E(k)
    if family is WaveFamily.CKDV_CNOIDAL:
        s = _s(k)
        num = K * (k**4 - 3.0 * k * k + 2.0) - 2.0 * E * (k**4 - k * k + 1.0)
        return -16.0 * K * num / (L * L * k * (1.0 - k * k) * s)
    num = (1.0 - 2.0 * k * k) * E - (1.0 - k * k) * K
    return -32.0 * K * num / (k * (1.0 - k * k) * L * L)


def dA_dk(family, L: float, k: float) -> float:
    """k-derivative of the integration constant along the explicit curve."""
    family = WaveFamily.parse(family)
    if family.is_critical_kdv:
        return 0.0
    # A = 1/27 - (omega + 1/3)/3 along the Gardner curve
    return -domega_dk(family, L, k) / 3.0


def phi_second_analytic(p: WaveProfile, x):
    """phi'' by differentiating the elliptic expression twice.

    Independent of the profile equation, so it can be used to measure the
    ODE residual.
    """
    x = np.asarray(x, dtype=float)
    c = p.scale
    S, C, D = jacobi(c * x, p.k)
    k2 = p.k**2
    if p.family is WaveFamily.GARDNER_CNOIDAL:
        return -p.b * c * c * C * (D * D - k2 * S * S)
    den = 1.0 - p.b * S * S
    if p.family is WaveFamily.CKDV_DNOIDAL:
        inner = (C * C - S * S) * den + 3.0 * p.b * S * S * C * C
        return p.a * c * c * (p.b - k2) * D * inner / den**2.5
    inner = (D * D - k2 * S * S) * den + 3.0 * p.b * S * S * D * D
    return p.a * c * c * (p.b - 1.0) * C * inner / den**2.5


def ode_residual(p: WaveProfile, x) -> np.ndarray:
    """-phi'' + omega phi - g(phi) - A with the analytic second derivative."""
    phi, _, _ = eval_phi(p, x)
    return -phi_second_analytic(p, x) + p.omega * phi - p.family.g(phi) - p.A
