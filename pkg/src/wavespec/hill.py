"""Auxiliary initial value problems for the Hill operator -d^2/dx^2 + q(x).

With q = omega - g'(phi), three solutions on one period are needed:

* ybar: homogeneous, ybar(0) = -1/phi''(0), ybar'(0) = 0. Together with phi'
  it forms a fundamental system with unit Wronskian.
* psi:  forcing -phi, giving psi = L^{-1}(-phi) once the initial value makes
  it periodic.
* eta:  forcing 1, giving eta = L^{-1} 1.

All three share one uniform grid so the trapezoid rule (spectrally accurate
for periodic integrands) reuses the nodes.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContractError, DegenerateProfileError, KernelNotSimpleError, NumericError
from .profiles import WaveProfile, eval_phi

DEFAULT_N = 2048
MIN_N = 64
THETA_MIN = 1e-8
PERIODICITY_RTOL = 1e-6


def default_grid_n(profile: WaveProfile | None = None, base: int | None = None) -> int:
    """Grid size keeping the number of steps per oscillation roughly fixed."""
    if base is None:
        base = int(os.environ.get("WAVESPEC_GRID_N", DEFAULT_N))
    if profile is None:
        return base
    return max(base, 256 * math.ceil(4.0 * profile.K))


@dataclass
class Trajectory:
    x: np.ndarray
    y: np.ndarray
    yp: np.ndarray
    err_est: float = 0.0
    start_values: dict | None = None

    @property
    def N(self) -> int:
        return len(self.x) - 1

    @property
    def L(self) -> float:
        return float(self.x[-1])


@dataclass
class HillOperatorSpec:
    """The Hill operator around a profile.

    ``potential`` defaults to omega - g'(phi); pass another callable to use
    an equivalent presentation (e.g. the mKdV form of a Gardner wave).
    """

    profile: WaveProfile
    potential: Callable | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def q(self, x):
        if self.potential is None:
            return self.profile.potential(x)
        return self.potential(x)

    def samples(self, N: int):
        """Potential and phi at spacing L/(4N), as needed by the Richardson pass."""
        if N not in self._cache:
            xs = np.linspace(0.0, self.profile.L, 4 * N + 1)
            phi, _, _ = eval_phi(self.profile, xs)
            self._cache[N] = (xs, np.asarray(self.q(xs), dtype=float), phi)
        return self._cache[N]


@dataclass
class HillData:
    ybar: Trajectory
    theta: float
    psi: Trajectory
    eta: Trajectory
    wronskian_drift: float
    phi_pp0: float
    periodicity: dict

    @property
    def x(self) -> np.ndarray:
        return self.ybar.x


def _as_samples(f, xs):
    if f is None:
        return np.zeros_like(xs)
    if callable(f):
        return np.broadcast_to(np.asarray(f(xs), dtype=float), xs.shape).copy()
    return np.full_like(xs, float(f))


def _march(qs, rs, ws, y, yp, h, n, stride):
    """Classical RK4 for y'' = q y - r, plus accumulators z_a' = w_a(x) y.

    ``qs``, ``rs`` and each ``ws[a]`` are Python lists sampled every
    h / stride * 2; ``rs`` may be None for the homogeneous equation.
    """
    Y = [0.0] * (n + 1)
    P = [0.0] * (n + 1)
    Y[0], P[0] = y, yp
    acc = [0.0] * len(ws)
    half = stride // 2
    h2, h6 = 0.5 * h, h / 6.0
    for i in range(n):
        j = i * stride
        q0, q1, q2 = qs[j], qs[j + half], qs[j + stride]
        if rs is None:
            r0 = r1 = r2 = 0.0
        else:
            r0, r1, r2 = rs[j], rs[j + half], rs[j + stride]
        k1y = yp
        k1p = q0 * y - r0
        y2 = y + h2 * k1y
        k2y = yp + h2 * k1p
        k2p = q1 * y2 - r1
        y3 = y + h2 * k2y
        k3y = yp + h2 * k2p
        k3p = q1 * y3 - r1
        y4 = y + h * k3y
        k4y = yp + h * k3p
        k4p = q2 * y4 - r2
        for a, w in enumerate(ws):
            acc[a] += h6 * (w[j] * y + 2.0 * w[j + half] * (y2 + y3) + w[j + stride] * y4)
        y = y + h6 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        yp = yp + h6 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        Y[i + 1], P[i + 1] = y, yp
    Y, P = np.array(Y), np.array(P)
    bad = ~(np.isfinite(Y) & np.isfinite(P))
    if bad.any():
        raise NumericError(f"non-finite state near x={int(np.argmax(bad)) * h!r}")
    return Y, P, acc


def _richardson(qs, rs, y0, yp0, L, N, ws=()):
    """RK4 at steps h and h/2 on samples spaced h/4, then extrapolate.

    Returns node values and accumulator integrals. The relative error
    estimate comes from the difference of the two passes.
    """
    qs = np.asarray(qs, dtype=float).tolist()
    rs = None if rs is None else np.asarray(rs, dtype=float).tolist()
    ws = [np.asarray(w, dtype=float).tolist() for w in ws]
    h = L / N
    Yc, Pc, Zc = _march(qs, rs, ws, float(y0), float(yp0), h, N, stride=4)
    Yf, Pf, Zf = _march(qs, rs, ws, float(y0), float(yp0), 0.5 * h, 2 * N, stride=2)
    Yf, Pf = Yf[::2], Pf[::2]
    dY, dP = (Yf - Yc) / 15.0, (Pf - Pc) / 15.0
    Z = [zf + (zf - zc) / 15.0 for zf, zc in zip(Zf, Zc)]
    err = float(np.abs(dY).max() / max(np.abs(Yf).max(), 1e-300))
    return Yf + dY, Pf + dP, Z, err


def integrate_second_order(q, r, y0: float, yp0: float, L: float, N: int = DEFAULT_N) -> Trajectory:
    """Solve -y'' + q(x) y = r(x) on [0, L] from (y0, yp0).

    ``q`` and ``r`` may be callables (vectorized in x), constants or None
    (zero forcing). Values are returned on the N + 1 nodes of a uniform grid.
    """
    if N < MIN_N:
        raise ContractError(f"grid size must be at least {MIN_N}, got {N}")
    xs = np.linspace(0.0, L, 4 * N + 1)
    qs = _as_samples(q, xs)
    rs = None if r is None else _as_samples(r, xs)
    Y, P, _, err = _richardson(qs, rs, y0, yp0, L, N)
    return Trajectory(xs[::4].copy(), Y, P, err)


def periodic_quadrature(values, x=None, L: float | None = None) -> float:
    """Trapezoid rule over one period.

    ``values`` are samples on N + 1 uniform nodes including both endpoints.
    Pass the nodes ``x`` to have uniformity checked, or just the period ``L``.
    """
    values = np.asarray(values, dtype=float)
    if x is not None:
        x = np.asarray(x, dtype=float)
        dx = np.diff(x)
        if dx.size == 0 or np.abs(dx - dx.mean()).max() > 1e-9 * abs(dx.mean()):
            raise ContractError("periodic_quadrature needs a uniform grid")
        L = float(x[-1] - x[0])
    if L is None:
        raise ContractError("give either the grid x or the period L")
    h = L / (values.size - 1)
    return float(h * (values.sum() - 0.5 * (values[0] + values[-1])))


def _phi_pp0(spec: HillOperatorSpec) -> float:
    _, _, pp0 = eval_phi(spec.profile, 0.0)
    if abs(pp0) < 1e-12:
        raise DegenerateProfileError(f"phi''(0) = {pp0!r} vanishes; shift the origin")
    return pp0


def _as_spec(obj) -> HillOperatorSpec:
    return obj if isinstance(obj, HillOperatorSpec) else HillOperatorSpec(obj)


def compute_ybar(spec, N: int | None = None) -> tuple[Trajectory, float]:
    """Homogeneous solution with ybar(0) = -1/phi''(0) and the constant theta."""
    traj, theta, _ = _ybar_pass(_as_spec(spec), N)
    return traj, theta


def _ybar_pass(spec: HillOperatorSpec, N: int | None):
    # ybar is not periodic, so the integrals fixing psi(0) and eta(0) are
    # carried as extra RK states instead of trapezoid sums
    N = N or default_grid_n(spec.profile)
    pp0 = _phi_pp0(spec)
    xs, qs, phi = spec.samples(N)
    Y, P, (int_phi_y, int_y), err = _richardson(
        qs, None, -1.0 / pp0, 0.0, spec.profile.L, N, ws=(phi, np.ones_like(phi))
    )
    traj = Trajectory(xs[::4].copy(), Y, P, err)
    theta = traj.yp[-1] / pp0
    if abs(theta) < THETA_MIN:
        raise KernelNotSimpleError(f"theta = {theta!r}: kernel not simple at tolerance {THETA_MIN}")
    ypL = traj.yp[-1]
    start = {"psi": -int_phi_y / ypL, "eta": int_y / ypL}
    traj.start_values = start
    return traj, float(theta), start


def _start_values(spec: HillOperatorSpec, ybar: Trajectory, N: int):
    start = getattr(ybar, "start_values", None)
    if start is None:
        _, _, start = _ybar_pass(spec, N)
    return start


def compute_psi(spec, ybar: Trajectory, N: int | None = None) -> Trajectory:
    """Periodic solution of -psi'' + q psi = -phi, psi(0) fixed by ybar."""
    spec = _as_spec(spec)
    N = N or ybar.N
    xs, qs, phi = spec.samples(N)
    psi0 = _start_values(spec, ybar, N)["psi"]
    Y, P, _, err = _richardson(qs, -phi, psi0, 0.0, spec.profile.L, N)
    return Trajectory(xs[::4].copy(), Y, P, err)


def compute_eta(spec, ybar: Trajectory, N: int | None = None) -> Trajectory:
    """Periodic solution of -eta'' + q eta = 1, eta(0) fixed by ybar."""
    spec = _as_spec(spec)
    N = N or ybar.N
    xs, qs, phi = spec.samples(N)
    eta0 = _start_values(spec, ybar, N)["eta"]
    Y, P, _, err = _richardson(qs, np.ones_like(phi), eta0, 0.0, spec.profile.L, N)
    return Trajectory(xs[::4].copy(), Y, P, err)


def wronskian(profile: WaveProfile, ybar: Trajectory) -> np.ndarray:
    """W(phi', ybar) = phi' ybar' - phi'' ybar on the grid; identically 1."""
    _, dphi, d2phi = eval_phi(profile, ybar.x)
    return dphi * ybar.yp - d2phi * ybar.y


def periodicity_residual(traj: Trajectory) -> float:
    ry = abs(traj.y[-1] - traj.y[0]) / max(np.abs(traj.y).max(), 1e-300)
    rp = abs(traj.yp[-1] - traj.yp[0]) / max(np.abs(traj.yp).max(), 1e-300)
    return float(max(ry, rp))


def solve_hill(spec, N: int | None = None) -> HillData:
    """Run both passes (ybar, then psi and eta) on one grid."""
    spec = _as_spec(spec)
    p = spec.profile
    N = N or default_grid_n(p)
    ybar, theta, _ = _ybar_pass(spec, N)
    psi = compute_psi(spec, ybar, N)
    eta = compute_eta(spec, ybar, N)
    drift = float(np.abs(wronskian(p, ybar) - 1.0).max())
    per = {"psi": periodicity_residual(psi), "eta": periodicity_residual(eta)}
    return HillData(ybar, theta, psi, eta, drift, _phi_pp0(spec), per)
