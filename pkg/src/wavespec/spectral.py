"""Fourier truncation of the Hill operator and its inertial index.

The operator -d^2/dx^2 + q(x) on L-periodic functions is represented in the
real orthonormal basis

    1/sqrt(L),  sqrt(2/L) cos(2 pi m x / L),  sqrt(2/L) sin(2 pi m x / L),

m = 1..N. For an even potential the cosine and sine blocks decouple. The
eigenvalues come from a cyclic Jacobi rotation solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, ContractError, NumericError, ResolutionError
from .profiles import WaveProfile, eval_phi

DEFAULT_MODES = 64
MAX_MODES = 512
COEFF_TOL = 1e-12
ZERO_RTOL = 1e-6


@dataclass
class FourierHillMatrix:
    M: np.ndarray
    N: int
    L: float
    coeffs: np.ndarray  # Fourier coefficients of q, index 0..2N
    tail: float

    @property
    def wavenumbers(self) -> np.ndarray:
        m = np.arange(self.N + 1)
        return 2.0 * np.pi * np.concatenate([m, m[1:]]) / self.L

    def synthesize(self, vec, x) -> np.ndarray:
        """Evaluate the function with basis coefficients ``vec`` at ``x``."""
        N, L = self.N, self.L
        x = np.asarray(x, dtype=float)
        arg = 2.0 * np.pi * np.outer(x, np.arange(1, N + 1)) / L
        out = vec[0] / math.sqrt(L) * np.ones_like(x)
        out += math.sqrt(2.0 / L) * (np.cos(arg) @ vec[1 : N + 1] + np.sin(arg) @ vec[N + 1 :])
        return out


@dataclass
class InertialIndex:
    n_neg: int
    n_zero: int
    eigensample: list
    z_tol: float
    N: int = 0
    kernel_correlation: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.n_neg, self.n_zero)


def fourier_coefficients(q, L: float, count: int, samples: int | None = None) -> np.ndarray:
    """c_j = (1/L) int_0^L q(x) exp(-2 pi i j x / L) dx for j = 0..count-1 (real part)."""
    samples = samples or max(4 * count, 1024)
    xs = np.arange(samples) * (L / samples)
    vals = q(xs) if callable(q) else np.full(samples, float(q))
    c = np.fft.rfft(np.asarray(vals, dtype=float)) / samples
    if np.abs(c.imag).max() > 1e-10 * max(1.0, np.abs(c.real).max()):
        raise ContractError("potential must be even about x = 0")
    return c.real[:count].copy()


def assemble_hill(q, L: float, N: int = DEFAULT_MODES) -> FourierHillMatrix:
    """Matrix of -d^2/dx^2 + q in the cosine/sine basis with modes up to N."""
    if N < 1:
        raise ContractError(f"mode cutoff must be positive, got {N}")
    # alias-free up to |m +- n| <= 2N; extra samples expose the tail
    c = fourier_coefficients(q, L, 4 * N + 1, samples=max(16 * N, 1024))
    peak = max(1.0, np.abs(c).max())
    tail = float(np.abs(c[N:]).max() / peak)
    if tail > COEFF_TOL:
        above = np.nonzero(np.abs(c) > COEFF_TOL * peak)[0]
        suggested = int(16 * math.ceil((above[-1] + 8) / 16))
        raise ResolutionError(
            f"Fourier coefficients of the potential have not decayed below {COEFF_TOL} by index {N} "
            f"(tail {tail:.2e}); use N >= {suggested}",
            suggested_n=suggested,
        )
    c = c[: 2 * N + 1]
    m = np.arange(N + 1)
    diff = c[np.abs(m[:, None] - m[None, :])]
    summ = c[m[:, None] + m[None, :]]
    C = diff + summ
    C[0, :] /= math.sqrt(2.0)
    C[:, 0] /= math.sqrt(2.0)
    ms = m[1:]
    S = c[np.abs(ms[:, None] - ms[None, :])] - c[ms[:, None] + ms[None, :]]
    kin = (2.0 * np.pi * m / L) ** 2
    M = np.zeros((2 * N + 1, 2 * N + 1))
    M[: N + 1, : N + 1] = C + np.diag(kin)
    M[N + 1 :, N + 1 :] = S + np.diag(kin[1:])
    return FourierHillMatrix(M, N, float(L), c, tail)


def assemble(profile: WaveProfile, N: int = DEFAULT_MODES) -> FourierHillMatrix:
    if N < 32:
        raise ContractError(f"mode cutoff must be at least 32, got {N}")
    return assemble_hill(profile.potential, profile.L, N)


def _round_robin(n: int):
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        yield [(p, q) if p < q else (q, p) for p, q in pairs if p >= 0 and q >= 0]
        players = [players[0], players[-1]] + players[1:-1]


def eigen_symmetric(M, tol: float = 1e-12, max_sweeps: int = 60, vectors: bool = False):
    """Eigenvalues (ascending) of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order so
    that the n/2 disjoint rotations of a round are applied together.
    """
    A = np.array(M, dtype=float)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise ContractError("matrix must be square")
    if np.abs(A - A.T).max() > 1e-12 * max(1.0, np.abs(A).max()):
        raise ContractError("matrix must be symmetric")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    norm = np.linalg.norm(A)
    rounds = [tuple(np.array(z) for z in zip(*r)) for r in _round_robin(n) if r]

    def off(A):
        return float(np.linalg.norm(A - np.diag(np.diag(A))))

    for _ in range(max_sweeps):
        if off(A) <= tol * norm or n < 2:
            break
        for p, q in rounds:
            apq = A[p, q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            theta = np.where(active, (A[q, q] - A[p, p]) / (2.0 * np.where(active, apq, 1.0)), 0.0)
            t = np.where(active, np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
            t = np.where(active & (theta == 0.0), 1.0, t)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            Ap, Aq = A[p, :].copy(), A[q, :].copy()
            A[p, :] = c[:, None] * Ap - s[:, None] * Aq
            A[q, :] = s[:, None] * Ap + c[:, None] * Aq
            Ap, Aq = A[:, p].copy(), A[:, q].copy()
            A[:, p] = Ap * c - Aq * s
            A[:, q] = Ap * s + Aq * c
            A[p, q] = 0.0
            A[q, p] = 0.0
            if vectors:
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = Vp * c - Vq * s
                V[:, q] = Vp * s + Vq * c
    else:
        raise NumericError(f"Jacobi rotations did not converge in {max_sweeps} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(w)
    if vectors:
        return w[order], V[:, order]
    return w[order]


def spectral_scale(profile: WaveProfile) -> float:
    """Size of the low part of the spectrum: sup|q| + (2 pi / L)^2."""
    xs = np.linspace(0.0, profile.L, 1025)
    return float(np.abs(profile.potential(xs)).max() + (2.0 * np.pi / profile.L) ** 2)


def inertial_index(eigs, scale: float, theta: float | None = None, n_expected: int | None = None,
                   count: int = 5) -> InertialIndex:
    """Count negative and (numerically) zero eigenvalues.

    With ``theta`` the count is checked against the sign rule: theta < 0 puts
    the zero eigenvalue second, index (1, 1); theta > 0 puts it third, (2, 1).
    """
    eigs = np.sort(np.asarray(eigs, dtype=float))
    z_tol = ZERO_RTOL * scale
    n_neg = int(np.sum(eigs < -z_tol))
    n_zero = int(np.sum(np.abs(eigs) <= z_tol))
    idx = InertialIndex(n_neg, n_zero, eigs[:count].tolist(), z_tol)
    if theta is not None:
        predicted = (1, 1) if theta < 0 else (2, 1)
        if idx.pair != predicted:
            raise ConsistencyError(f"counted inertial index {idx.pair} but theta={theta:.6g} predicts {predicted}")
    if n_expected is not None and n_neg != n_expected:
        raise ConsistencyError(f"counted {n_neg} negative eigenvalues, family expects {n_expected}")
    return idx


def kernel_correlation(H: FourierHillMatrix, vecs, eigs, profile: WaveProfile) -> float:
    """|corr| between the eigenfunction nearest zero and phi'."""
    j = int(np.argmin(np.abs(eigs)))
    xs = np.linspace(0.0, profile.L, 2049)
    v = H.synthesize(vecs[:, j], xs)
    _, dphi, _ = eval_phi(profile, xs)
    num = abs(np.sum(v[:-1] * dphi[:-1]))
    den = math.sqrt(np.sum(v[:-1] ** 2) * np.sum(dphi[:-1] ** 2))
    return float(num / den)


def default_modes(profile: WaveProfile) -> int:
    return DEFAULT_MODES if profile.k <= 0.99 else 2 * DEFAULT_MODES


def check_profile(profile: WaveProfile, N: int | None = None, theta: float | None = None,
                  check_expected: bool = True, count: int = 5) -> InertialIndex:
    """Diagonalize the truncation and count, raising N when the potential demands it."""
    N = N or default_modes(profile)
    while True:
        try:
            H = assemble(profile, N)
            break
        except ResolutionError as exc:
            if exc.suggested_n > MAX_MODES or exc.suggested_n <= N:
                raise
            N = exc.suggested_n
    eigs, vecs = eigen_symmetric(H.M, vectors=True)
    n_exp = profile.family.n_expected if check_expected else None
    idx = inertial_index(eigs, spectral_scale(profile), theta=theta, n_expected=n_exp, count=count)
    idx.N = N
    idx.kernel_correlation = kernel_correlation(H, vecs, eigs, profile)
    return idx
