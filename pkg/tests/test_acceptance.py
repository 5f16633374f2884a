"""Acceptance gate: one block per criterion, summarized at the end of the run.

Run directly with ``python3 tests/test_acceptance.py`` or as part of pytest.
"""

import math
import sys
import time

import numpy as np
import pytest
from scipy.integrate import quad

from acceptance_log import record
from reference_tables import CNOIDAL, CNOIDAL_K0_BRACKET, DNOIDAL, GARDNER_K0, TWO_PI
from wavespec.errors import NoThresholdError
from wavespec.hill import HillOperatorSpec, compute_ybar, periodic_quadrature, solve_hill, wronskian
from wavespec.profiles import (
    WaveFamily,
    domega_dk,
    eval_phi,
    make_profile,
    mkdv_potential,
    ode_residual,
)
from wavespec.spectral import check_profile
from wavespec.special import complementary, complete_E, complete_K
from wavespec.stability import (
    Verdict,
    analyze,
    closed_form_norm_cnoidal,
    closed_form_norm_gardner,
    compute_I,
    detD_closed_form,
    dnorm_dk_gardner,
    inner_products,
    mkdv_inner_products,
)
from wavespec.threshold import find_k0

PERIODS = [TWO_PI, 20.0, 50.0, 100.0]
L_ID = lambda L: "2pi" if L == TWO_PI else f"{L:g}"


def rel(a, b):
    return abs(a - b) / abs(b)


# -- criterion 1 -------------------------------------------------------------


@pytest.fixture(scope="module")
def dnoidal_reports():
    t0 = time.perf_counter()
    reps = {(L, k): analyze("ckdv-dnoidal", L, k) for L in PERIODS for k, _, _ in DNOIDAL[L]}
    return reps, time.perf_counter() - t0


class TestCriterion1DnoidalTables:
    @pytest.mark.parametrize("L", PERIODS, ids=L_ID)
    def test_rows(self, dnoidal_reports, L):
        reps, _ = dnoidal_reports
        bad = []
        for k, I_ref, det_ref in DNOIDAL[L]:
            r = reps[(L, k)]
            eI, eD = rel(r.I, I_ref), rel(r.D.det_D, det_ref)
            if eI > 5e-3 or eD > 2e-2:
                bad.append(f"k={k}: I {r.I:.6g} vs {I_ref} ({eI:.1e}), det {r.D.det_D:.6g} vs {det_ref} ({eD:.1e})")
        record(1, f"L={L_ID(L)}", not bad, "; ".join(bad))
        assert not bad

    def test_runtime(self, dnoidal_reports):
        _, elapsed = dnoidal_reports
        record(1, "24 rows under 60 s", elapsed < 60.0, f"{elapsed:.1f} s")
        assert elapsed < 60.0


# -- criterion 2 -------------------------------------------------------------


class TestCriterion2CnoidalTables:
    @pytest.mark.parametrize("L", PERIODS, ids=L_ID)
    def test_rows(self, L):
        bad = []
        for k, I_ref in CNOIDAL[L]:
            I = compute_I("ckdv-cnoidal", L, k)
            if abs(I_ref) > 0.1:
                ok = rel(I, I_ref) <= 5e-3
            else:
                ok = np.sign(I) == np.sign(I_ref) and rel(I, I_ref) <= 0.5
            if not ok:
                bad.append(f"k={k}: {I:.6g} vs {I_ref}")
        record(2, f"L={L_ID(L)}", not bad, f"{len(bad)}/{len(CNOIDAL[L])} rows off, e.g. {bad[0]}" if bad else "")
        assert not bad


# -- criterion 3 -------------------------------------------------------------


class TestCriterion3Thresholds:
    @pytest.mark.parametrize("L", PERIODS, ids=L_ID)
    def test_cnoidal(self, L):
        lo, hi = CNOIDAL_K0_BRACKET[L]
        try:
            k0 = find_k0("ckdv-cnoidal", L).k0
            ok = 0.744 <= k0 <= 0.746 and (lo <= k0 <= hi or L == TWO_PI)
            detail = f"k0={k0:.6f}"
        except NoThresholdError as exc:
            ok, detail = False, f"NoThreshold: {exc}"
        record(3, f"ckdv-cnoidal L={L_ID(L)}", ok, detail)
        assert ok

    @pytest.mark.parametrize("L", [TWO_PI, 20.0, 50.0], ids=L_ID)
    def test_gardner(self, L):
        k0 = find_k0("gardner", L).k0
        ok = abs(k0 - GARDNER_K0) <= 0.002
        record(3, f"gardner L={L_ID(L)}", ok, f"k0={k0:.6f}")
        assert ok

    def test_dnoidal(self):
        try:
            find_k0("ckdv-dnoidal", 20.0)
            ok = False
        except NoThresholdError:
            ok = True
        record(3, "ckdv-dnoidal NoThreshold", ok)
        assert ok


# -- criterion 4 -------------------------------------------------------------


def _k0_or_reference(family, L):
    try:
        return find_k0(family, L).k0, ""
    except NoThresholdError:
        lo, hi = CNOIDAL_K0_BRACKET[L]
        return 0.5 * (lo + hi), " (no computed k0; reference bracket used)"


class TestCriterion4Verdicts:
    def test_dnoidal_all_stable(self, dnoidal_reports):
        reps, _ = dnoidal_reports
        bad = [key for key, r in reps.items() if r.verdict is not Verdict.STABLE]
        record(4, "dnoidal stable at all rows", not bad, str(bad) if bad else "")
        assert not bad

    @pytest.mark.parametrize("family", ["ckdv-cnoidal", "gardner"])
    @pytest.mark.parametrize("L", [TWO_PI, 20.0], ids=L_ID)
    def test_flip(self, family, L):
        k0, note = _k0_or_reference(family, L)
        below = analyze(family, L, k0 - 0.05).verdict
        above = analyze(family, L, k0 + 0.05).verdict
        ok = below is Verdict.STABLE and above is Verdict.UNSTABLE
        record(4, f"{family} L={L_ID(L)}", ok,
               f"k0-0.05: {below.value}, k0+0.05: {above.value}{note}")
        assert ok


# -- criterion 5 -------------------------------------------------------------


GRID5 = [(f, L, k) for f in WaveFamily for L in (TWO_PI, 50.0) for k in (0.1, 0.5, 0.9, 0.99, 0.9999)]


class TestCriterion5Invariants:
    def test_wronskian_and_periodicity(self):
        worst_w = worst_p = 0.0
        for f, L, k in GRID5:
            p = make_profile(f, L, k)
            hd = solve_hill(p)
            worst_w = max(worst_w, hd.wronskian_drift)
            worst_p = max(worst_p, *hd.periodicity.values())
        ok = worst_w < 1e-8 and worst_p < 1e-6
        record(5, "Wronskian drift and psi/eta periodicity", ok, f"drift {worst_w:.1e}, periodicity {worst_p:.1e}")
        assert ok

    def test_ode_residual(self):
        worst = 0.0
        for f in WaveFamily:
            for L in PERIODS:
                for k in np.linspace(0.01, 0.9999, 20):
                    p = make_profile(f, L, k)
                    x = np.linspace(0, L, 200)
                    worst = max(worst, np.abs(ode_residual(p, x)).max() / max(1.0, abs(p.omega)))
        record(5, "profile ODE residual", worst < 1e-8, f"{worst:.1e}")
        assert worst < 1e-8

    def test_legendre(self):
        worst = 0.0
        for k in np.linspace(0.01, 0.99, 50):
            kp = complementary(k)
            K, E, Kp, Ep = complete_K(k), complete_E(k), complete_K(kp), complete_E(kp)
            worst = max(worst, abs(E * Kp + Ep * K - K * Kp - math.pi / 2))
        record(5, "Legendre relation", worst < 1e-12, f"{worst:.1e}")
        assert worst < 1e-12

    def test_closed_form_norms(self):
        worst = 0.0
        for f, norm in (("ckdv-cnoidal", closed_form_norm_cnoidal), ("gardner", closed_form_norm_gardner)):
            for L in (TWO_PI, 20.0):
                for k in (0.2, 0.5, 0.8):
                    p = make_profile(f, L, k)
                    q = quad(lambda x: eval_phi(p, x)[0] ** 2, 0, L, limit=400, epsabs=0, epsrel=1e-13)[0]
                    worst = max(worst, rel(norm(L, k), q))
        record(5, "closed-form norms vs quadrature", worst < 1e-8, f"{worst:.1e}")
        assert worst < 1e-8

    def test_monotonicity(self):
        ks = np.linspace(0.01, 0.99, 50)
        w_min = min(domega_dk(f, L, k) for f in WaveFamily for L in PERIODS for k in ks)
        n_min = min(dnorm_dk_gardner(L, k) for L in PERIODS for k in ks)
        ok = w_min > 0 and n_min > 0
        record(5, "domega/dk > 0 and Gardner d/dk int phi^2 > 0", ok, f"min {w_min:.2e}, {n_min:.2e}")
        assert ok


# -- criterion 6 -------------------------------------------------------------


class TestCriterion6CrossPath:
    @pytest.mark.parametrize("family", ["ckdv-cnoidal", "gardner"])
    def test_grid(self, family):
        worst = 0.0
        for L in (TWO_PI, 20.0):
            for k in np.linspace(0.05, 0.95, 10):
                p = make_profile(family, L, k)
                hd = solve_hill(p)
                ip = mkdv_inner_products(hd, p) if family == "gardner" else inner_products(hd, p)
                worst = max(worst, rel(ip.lphi_phi, detD_closed_form(family, L, k)))
        record(6, family, worst < 1e-3, f"worst rel {worst:.1e}")
        assert worst < 1e-3


# -- criterion 7 -------------------------------------------------------------


class TestCriterion7Spectral:
    @pytest.mark.parametrize("family", list(WaveFamily), ids=lambda f: f.value)
    def test_index(self, family):
        expected = (family.n_expected, 1)
        bad = []
        for L in (TWO_PI, 20.0):
            for k in (0.2, 0.5, 0.8, 0.95):
                p = make_profile(family, L, k)
                theta = solve_hill(p).theta
                idx = check_profile(p)
                theta_pair = (1, 1) if theta < 0 else (2, 1)
                if idx.pair != expected or idx.pair != theta_pair or idx.kernel_correlation <= 0.999:
                    bad.append(f"L={L_ID(L)} k={k}: {idx.pair} theta={theta:.3g} corr={idx.kernel_correlation:.4f}")
        record(7, family.value, not bad, "; ".join(bad))
        assert not bad


# -- criterion 8 -------------------------------------------------------------


class TestCriterion8Galilean:
    def test_identity(self):
        worst_q = 0.0
        mismatched = []
        for L in (TWO_PI, 20.0, 50.0):
            for k in (0.2, 0.5, 0.8, 0.95):
                p = make_profile("gardner", L, k)
                x = np.linspace(0, L, 1001)
                worst_q = max(worst_q, np.abs(p.potential(x) - mkdv_potential(p, x)).max())
                a = solve_hill(p)
                b = solve_hill(HillOperatorSpec(p, potential=lambda t, p=p: mkdv_potential(p, t)))
                Ia, Ib = periodic_quadrature(a.eta.y, a.x), periodic_quadrature(b.eta.y, b.x)
                if f"{Ia:.12g}" != f"{Ib:.12g}":
                    mismatched.append(f"L={L_ID(L)} k={k}: {Ia:.12g} vs {Ib:.12g}")
        ok = worst_q < 1e-12 and not mismatched
        record(8, "Gardner/mKdV potentials and I", ok, f"potential diff {worst_q:.1e}; " + "; ".join(mismatched))
        assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
