"""Elliptic integrals and the Jacobi elliptic functions.

Everything takes the modulus ``k`` (not the parameter ``m = k**2``).
Complete integrals come from the arithmetic-geometric mean and the Jacobi
functions from the descending Landen transformation. Incomplete integrals
go through Carlson's symmetric forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NumericError

_AGM_RTOL = 1e-15
_AGM_MAXITER = 40
_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class Modulus:
    k: float

    def __post_init__(self):
        if not (0.0 < self.k < 1.0):
            raise DomainError(f"modulus must lie in (0, 1), got {self.k!r}")

    @property
    def kprime(self) -> float:
        return complementary(self.k)


class EllipticTriple(NamedTuple):
    sn: np.ndarray | float
    cn: np.ndarray | float
    dn: np.ndarray | float


def complementary(k: float) -> float:
    """k' = sqrt(1 - k^2), evaluated without cancellation near k = 1."""
    return math.sqrt((1.0 - k) * (1.0 + k))


def _agm_sequence(a: float, b: float) -> tuple[list[float], list[float], list[float]]:
    # returns a_n, b_n, c_n with c_0 left for the caller to fill
    As, Bs, Cs = [a], [b], [0.0]
    for _ in range(_AGM_MAXITER):
        if abs(a - b) < _AGM_RTOL * a:
            return As, Bs, Cs
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        if not math.isfinite(a):
            break
        As.append(a)
        Bs.append(b)
        Cs.append(c)
    raise NumericError(f"AGM did not converge for ({As[0]!r}, {Bs[0]!r})")


def _check_k(k: float, allow_one: bool = False) -> float:
    k = float(k)
    if not math.isfinite(k):
        raise DomainError(f"modulus must be finite, got {k!r}")
    upper_ok = k <= 1.0 if allow_one else k < 1.0
    if k < 0.0 or not upper_ok:
        bound = "[0, 1]" if allow_one else "[0, 1)"
        raise DomainError(f"modulus must lie in {bound}, got {k!r}")
    return k


def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind, K(k) = pi / (2 AGM(1, k'))."""
    k = _check_k(k)
    if k == 0.0:
        return _HALF_PI
    As, _, _ = _agm_sequence(1.0, complementary(k))
    return math.pi / (2.0 * As[-1])


def complete_E(k: float) -> float:
    """Complete elliptic integral of the second kind.

    Uses E = K (1 - sum_n 2^(n-1) c_n^2) with c_0 = k and the AGM
    differences c_{n+1} = (a_n - b_n) / 2.
    """
    k = _check_k(k, allow_one=True)
    if k == 0.0:
        return _HALF_PI
    if k == 1.0:
        return 1.0
    As, _, Cs = _agm_sequence(1.0, complementary(k))
    Cs[0] = k
    s = sum(2.0 ** (n - 1) * c * c for n, c in enumerate(Cs))
    return math.pi / (2.0 * As[-1]) * (1.0 - s)


def carlson_rf(x: float, y: float, z: float) -> float:
    errtol = 1e-4
    for _ in range(200):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        ave = (x + y + z) / 3.0
        dx, dy, dz = (ave - x) / ave, (ave - y) / ave, (ave - z) / ave
        if max(abs(dx), abs(dy), abs(dz)) < errtol:
            break
    else:
        raise NumericError("R_F duplication did not converge")
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / math.sqrt(ave)


def carlson_rd(x: float, y: float, z: float) -> float:
    errtol = 1e-4
    total, fac = 0.0, 1.0
    for _ in range(200):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        total += fac / (sz * (z + lam))
        fac *= 0.25
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        ave = 0.2 * (x + y + 3.0 * z)
        dx, dy, dz = (ave - x) / ave, (ave - y) / ave, (ave - z) / ave
        if max(abs(dx), abs(dy), abs(dz)) < errtol:
            break
    else:
        raise NumericError("R_D duplication did not converge")
    c1, c2, c3, c4 = 3.0 / 14.0, 1.0 / 6.0, 9.0 / 22.0, 3.0 / 26.0
    c5, c6 = 0.25 * c3, 1.5 * c4
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + 2.0 * ec
    series = 1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) + dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))
    return 3.0 * total + fac * series / (ave * math.sqrt(ave))


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not (0.0 <= beta <= _HALF_PI):
        raise DomainError(f"amplitude must lie in [0, pi/2], got {beta!r}")
    return beta


def incomplete_F(beta: float, k: float) -> float:
    """Incomplete elliptic integral of the first kind F(beta, k)."""
    beta = _check_beta(beta)
    k = _check_k(k)
    if beta == _HALF_PI:
        return complete_K(k)
    if beta == 0.0:
        return 0.0
    s, c = math.sin(beta), math.cos(beta)
    return s * carlson_rf(c * c, 1.0 - (k * s) ** 2, 1.0)


def incomplete_E(beta: float, k: float) -> float:
    """Incomplete elliptic integral of the second kind E(beta, k)."""
    beta = _check_beta(beta)
    k = _check_k(k, allow_one=True)
    if beta == _HALF_PI:
        return complete_E(k)
    if beta == 0.0:
        return 0.0
    s, c = math.sin(beta), math.cos(beta)
    x, y = c * c, 1.0 - (k * s) ** 2
    return s * carlson_rf(x, y, 1.0) - (k * k / 3.0) * s**3 * carlson_rd(x, y, 1.0)


def heuman_lambda(beta: float, k: float) -> float:
    """Heuman's Lambda function Lambda_0(beta, k)."""
    k = _check_k(k)
    kp = complementary(k)
    K, E = complete_K(k), complete_E(k)
    Fp, Ep = incomplete_F(beta, kp), incomplete_E(beta, kp)
    return (2.0 / math.pi) * (E * Fp + K * Ep - K * Fp)


def jacobi(u, k: float) -> EllipticTriple:
    """Jacobi elliptic functions sn, cn, dn of real argument ``u``.

    ``u`` may be a scalar or an array. The argument is first reduced modulo
    the real period 4K, then the amplitude is recovered by the descending
    Landen recursion.
    """
    k = _check_k(k)
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    if k == 0.0:
        out = EllipticTriple(np.sin(u), np.cos(u), np.ones_like(u))
    else:
        As, Bs, Cs = _agm_sequence(1.0, complementary(k))
        Cs[0] = k
        K = math.pi / (2.0 * As[-1])
        period = 4.0 * K
        ur = u - period * np.round(u / period)
        n = len(As) - 1
        phi = (2.0**n) * As[n] * ur
        for j in range(n, 0, -1):
            phi = 0.5 * (phi + np.arcsin(Cs[j] / As[j] * np.sin(phi)))
        sn, cn = np.sin(phi), np.cos(phi)
        # 1 - k^2 sn^2 written without cancellation
        kp = complementary(k)
        dn = np.sqrt(cn * cn + (kp * sn) ** 2)
        out = EllipticTriple(sn, cn, dn)
    if scalar:
        return EllipticTriple(float(out.sn), float(out.cn), float(out.dn))
    return out
