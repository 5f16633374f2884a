"""Hamiltonian-Krein count and the stability verdict.

The count is

    K_Ham = n(L) - n(I) - n(D)

where n(L) is the number of negative eigenvalues of the Hill operator,
I = <L^-1 1, 1> and D is the 2x2 matrix of L^-1 inner products against phi
and 1 scaled by 1/I. K_Ham = 0 means spectrally stable, 1 unstable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import AtThresholdError, ConsistencyError, DomainError, NumericError, WavespecError
from .hill import PERIODICITY_RTOL, HillData, HillOperatorSpec, periodic_quadrature, solve_hill
from .profiles import (
    WaveFamily,
    WaveProfile,
    _fd_step,
    derivative5,
    domega_dk,
    eval_phi,
    make_profile,
    mkdv_potential,
    mkdv_shift,
    ode_residual,
    omega_to_k,
)
from .special import complementary, complete_E, complete_K, heuman_lambda

I_MIN_REL = 1e-10
DET_TOL = 1e-12
DET_CONVENTION = "det_D = <L^-1 phi,phi> - <L^-1 phi,1>^2 / I  (det_raw / I)"


class Verdict(str, enum.Enum):
    STABLE = "SPECTRALLY_STABLE"
    UNSTABLE = "SPECTRALLY_UNSTABLE"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class InnerProducts:
    lphi_phi: float
    lphi_one: float
    lone_one: float

    @property
    def I(self) -> float:
        return self.lone_one


@dataclass(frozen=True)
class DMatrix:
    """D = (1/I) [[a, b], [b, I]] together with every determinant convention.

    ``det_D`` is the Schur complement a - b^2/I, the quantity tabulated and
    used for n(D).
    """

    entries: tuple
    det_raw: float
    det_prefactored: float
    det_D: float
    eigenvalues: tuple

    @property
    def prefactor(self) -> float:
        return self.entries[1][1]


@dataclass
class StabilityReport:
    family: WaveFamily | None
    L: float | None
    k: float | None
    omega: float | None
    A: float | None
    theta: float
    I: float
    D: DMatrix | None
    nL: int
    nI: int
    nD: int | None
    K_Ham: int | None
    verdict: Verdict
    crosschecks: dict = field(default_factory=dict)
    inner_products: InnerProducts | None = None
    spectral: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def stable(self) -> bool:
        return self.verdict is Verdict.STABLE

    def to_dict(self) -> dict:
        d = {
            "family": self.family.value if self.family else None,
            "L": self.L,
            "k": self.k,
            "omega": self.omega,
            "A": self.A,
            "theta": self.theta,
            "I": self.I,
            "nL": self.nL,
            "nI": self.nI,
            "nD": self.nD,
            "K_Ham": self.K_Ham,
            "verdict": self.verdict.value,
            "crosschecks": dict(self.crosschecks),
            "notes": list(self.notes),
            "det_convention": DET_CONVENTION,
        }
        if self.inner_products is not None:
            d["inner_products"] = asdict(self.inner_products)
        if self.D is not None:
            d["D"] = {
                "entries": [list(r) for r in self.D.entries],
                "det_D": self.D.det_D,
                "det_raw": self.D.det_raw,
                "det_prefactored": self.D.det_prefactored,
                "eigenvalues": list(self.D.eigenvalues),
            }
        else:
            d["D"] = None
        d["spectral"] = self.spectral
        return d


def _check_periodic(hd: HillData):
    for name, r in hd.periodicity.items():
        if not r < PERIODICITY_RTOL:
            raise NumericError(f"{name} is not periodic (relative residual {r:.2e}); refine the grid")


def inner_products(hd: HillData, p: WaveProfile, check: bool = True) -> InnerProducts:
    """Quadratures of psi and eta against phi and 1 on the shared grid."""
    if check:
        _check_periodic(hd)
    x = hd.x
    phi, _, _ = eval_phi(p, x)
    psi, eta = hd.psi.y, hd.eta.y
    return InnerProducts(
        lphi_phi=-periodic_quadrature(psi * phi, x),
        lphi_one=-periodic_quadrature(psi, x),
        lone_one=periodic_quadrature(eta, x),
    )


def mkdv_inner_products(hd: HillData, p: WaveProfile) -> InnerProducts:
    """Inner products for the shifted wave u = phi + 1/3 of a Gardner profile.

    Same operator, so L^-1 u = -psi + eta/3 needs no extra solve.
    """
    shift, _ = mkdv_shift(p)
    x = hd.x
    phi, _, _ = eval_phi(p, x)
    u = phi + shift
    lu = -hd.psi.y + shift * hd.eta.y
    return InnerProducts(
        lphi_phi=periodic_quadrature(lu * u, x),
        lphi_one=periodic_quadrature(lu, x),
        lone_one=periodic_quadrature(hd.eta.y, x),
    )


def build_D(ip: InnerProducts, L: float = 1.0) -> DMatrix:
    I = ip.lone_one
    if not abs(I) > I_MIN_REL * L:
        raise AtThresholdError(f"|I| = {abs(I):.3e} is below {I_MIN_REL * L:.1e}; D is undefined")
    a, b = ip.lphi_phi, ip.lphi_one
    det_raw = a * I - b * b
    entries = ((a / I, b / I), (b / I, 1.0))
    # closed-form eigenvalues of the symmetric 2x2
    tr = entries[0][0] + entries[1][1]
    gap = math.hypot(entries[0][0] - entries[1][1], 2.0 * entries[0][1])
    eig = (0.5 * (tr - gap), 0.5 * (tr + gap))
    return DMatrix(entries, det_raw, det_raw / (I * I), det_raw / I, eig)


def krein_classify(ip: InnerProducts, D: DMatrix, nL: int, theta: float,
                   profile: WaveProfile | None = None) -> StabilityReport:
    """n(I), n(D) and the verdict.

    n(D) counts the negative directions of L^-1 on span{phi, 1} beyond the
    one already counted by I, i.e. [det_D < 0].
    """
    I = ip.lone_one
    if not abs(D.det_D) > DET_TOL:
        raise AtThresholdError(f"|det D| = {abs(D.det_D):.3e} is below {DET_TOL}")
    nI = 1 if I < 0 else 0
    nD = 1 if D.det_D < 0 else 0
    K = nL - nI - nD
    notes = []
    if K == 0:
        verdict = Verdict.STABLE
    elif K == 1:
        verdict = Verdict.UNSTABLE
    else:
        verdict = Verdict.INDETERMINATE
        if K < 0:
            notes.append(f"K_Ham = {K} is negative, so the counts are inconsistent")
        else:
            notes.append(f"K_Ham = {K}: complex and negative-Krein pairs cannot be told apart from the count")
    fam = profile.family if profile else None
    return StabilityReport(
        family=fam,
        L=profile.L if profile else None,
        k=profile.k if profile else None,
        omega=profile.omega if profile else None,
        A=profile.A if profile else None,
        theta=float(theta),
        I=float(I),
        D=D,
        nL=int(nL),
        nI=nI,
        nD=nD,
        K_Ham=K,
        verdict=verdict,
        inner_products=ip,
        notes=notes,
    )


# -- closed forms ----------------------------------------------------------


def _cnoidal_b(k: float) -> float:
    return -1.0 + k * k - math.sqrt(k**4 - k * k + 1.0)


def closed_form_norm_cnoidal(L: float, k: float) -> float:
    """int phi^2 over a period for the critical KdV cnoidal wave (independent of L)."""
    if not 0.0 < k < 1.0:
        raise DomainError(f"modulus must lie in (0, 1), got {k!r}")
    b = _cnoidal_b(k)
    r1 = (k * k - 2.0 * b) * (1.0 - b)
    r2 = b * (b - k * k)
    if r1 <= 0.0 or r2 <= 0.0:
        raise DomainError(f"negative radicand in the norm formula at k={k!r}")
    beta = math.asin(1.0 / math.sqrt(1.0 - b))
    return 2.0 * math.pi * math.sqrt(r1) * (1.0 - heuman_lambda(beta, k)) / math.sqrt(r2)


def closed_form_norm_gardner(L: float, k: float) -> float:
    K, E = complete_K(k), complete_E(k)
    kp2 = complementary(k) ** 2
    return L / 9.0 + 32.0 * K * (E - kp2 * K) / L


def dnorm_dk_gardner(L: float, k: float) -> float:
    K, E = complete_K(k), complete_E(k)
    kp2 = complementary(k) ** 2
    return -32.0 * (kp2 * K * (2.0 * E - K) - E * E) / (k * kp2 * L)


def dnorm_dk_cnoidal(L: float, k: float) -> float:
    return derivative5(lambda t: closed_form_norm_cnoidal(L, t), k, _fd_step(k))


def detD_closed_form(family, L: float, k: float) -> float:
    """-1/2 d/domega int phi^2 along the explicit curve."""
    family = WaveFamily.parse(family)
    if family is WaveFamily.CKDV_CNOIDAL:
        dn = dnorm_dk_cnoidal(L, k)
    elif family is WaveFamily.GARDNER_CNOIDAL:
        dn = dnorm_dk_gardner(L, k)
    else:
        raise DomainError("closed-form det(D) needs a zero off-diagonal (cnoidal or Gardner family)")
    return -0.5 * dn / domega_dk(family, L, k)


# -- pipeline --------------------------------------------------------------


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _crosschecks(p: WaveProfile, hd: HillData, ip: InnerProducts, N: int) -> dict:
    xs = np.linspace(0.0, p.L, 201)
    cc = {
        "wronskian_drift": hd.wronskian_drift,
        "psi_periodicity": hd.periodicity["psi"],
        "eta_periodicity": hd.periodicity["eta"],
        "ode_residual": float(np.abs(ode_residual(p, xs)).max() / max(1.0, abs(p.omega))),
        "rk_error_estimate": max(hd.ybar.err_est, hd.psi.err_est, hd.eta.err_est),
    }
    if p.family is WaveFamily.CKDV_DNOIDAL:
        return cc
    try:
        ref = detD_closed_form(p.family, p.L, p.k)
    except (ArithmeticError, DomainError):
        ref = float("nan")
    cc["detD_closed_form"] = ref
    if p.family is WaveFamily.GARDNER_CNOIDAL:
        spec_m = HillOperatorSpec(p, potential=lambda x: mkdv_potential(p, x))
        hd_m = solve_hill(spec_m, N)
        I_m = periodic_quadrature(hd_m.eta.y, hd_m.x)
        cc["potential_identity"] = float(np.abs(p.potential(xs) - mkdv_potential(p, xs)).max())
        cc["I_mkdv"] = I_m
        cc["I_mkdv_rel_diff"] = _rel(I_m, ip.I)
        im = mkdv_inner_products(hd, p)
        cc["lphi_phi_mkdv"] = im.lphi_phi
        cc["lphi_one_mkdv"] = im.lphi_one
        cc["detD_closed_form_rel"] = _rel(im.lphi_phi, ref)
    else:
        cc["detD_closed_form_rel"] = _rel(ip.lphi_phi, ref)
    return cc


def _indeterminate(p: WaveProfile, theta: float, I: float, note: str, ip=None, D=None) -> StabilityReport:
    return StabilityReport(p.family, p.L, p.k, p.omega, p.A, float(theta), float(I), D,
                           p.family.n_expected, int(I < 0), None, None, Verdict.INDETERMINATE,
                           inner_products=ip, notes=[note])


def analyze(family, L: float, k: float | None = None, omega: float | None = None,
            N: int | None = None, spectral: bool = True) -> StabilityReport:
    """Run the whole pipeline for one wave and classify it."""
    family = WaveFamily.parse(family)
    if (k is None) == (omega is None):
        raise DomainError("give exactly one of k and omega")
    if k is None:
        k = omega_to_k(family, L, omega)
    p = make_profile(family, L, k)
    hd = solve_hill(p, N)
    N = hd.ybar.N
    ip = inner_products(hd, p)
    spec_summary = None
    blocked = None
    if spectral:
        from .spectral import check_profile

        try:
            idx = check_profile(p, theta=hd.theta)
            spec_summary = {
                "n_neg": idx.n_neg,
                "n_zero": idx.n_zero,
                "eigenvalues": idx.eigensample,
                "z_tol": idx.z_tol,
                "modes": idx.N,
                "kernel_correlation": idx.kernel_correlation,
            }
        except ConsistencyError as exc:
            blocked = f"spectral check disagrees with the expected inertial index: {exc}"
    try:
        D = build_D(ip, L)
    except AtThresholdError as exc:
        rep = _indeterminate(p, hd.theta, ip.I, str(exc), ip=ip)
        rep.crosschecks = _crosschecks(p, hd, ip, N)
        rep.spectral = spec_summary
        return rep
    try:
        rep = krein_classify(ip, D, p.family.n_expected, hd.theta, profile=p)
    except AtThresholdError as exc:
        rep = _indeterminate(p, hd.theta, ip.I, str(exc), ip=ip, D=D)
    if blocked:
        rep.verdict = Verdict.INDETERMINATE
        rep.notes.append(blocked)
    rep.crosschecks = _crosschecks(p, hd, ip, N)
    rep.spectral = spec_summary
    return rep


def compute_I(family, L: float, k: float, N: int | None = None) -> float:
    """I = <L^-1 1, 1> only; used by the threshold search."""
    p = make_profile(family, L, k)
    hd = solve_hill(p, N)
    _check_periodic(hd)
    return periodic_quadrature(hd.eta.y, hd.x)


__all__ = [
    "Verdict", "InnerProducts", "DMatrix", "StabilityReport", "inner_products",
    "mkdv_inner_products", "build_D", "krein_classify", "closed_form_norm_cnoidal",
    "closed_form_norm_gardner", "dnorm_dk_gardner", "dnorm_dk_cnoidal", "detD_closed_form",
    "analyze", "compute_I", "WavespecError",
]
