import math

import numpy as np
import pytest

from wavespec.errors import DomainError, NoThresholdError
from wavespec.profiles import WaveFamily, omega_of_k
from wavespec.stability import Verdict, analyze, compute_I
from wavespec.threshold import find_k0, sign_changes


@pytest.fixture(scope="module")
def gardner20():
    return find_k0("gardner", 20.0)


class TestGardner:
    def test_location(self, gardner20):
        assert gardner20.k0 == pytest.approx(0.909, abs=0.002)
        lo, hi = gardner20.bracket
        assert hi - lo < 1e-6
        assert compute_I("gardner", 20.0, lo) < 0 < compute_I("gardner", 20.0, hi)

    def test_speed(self, gardner20):
        assert gardner20.omega_at_k0 == omega_of_k("gardner", 20.0, gardner20.k0)
        assert gardner20.family is WaveFamily.GARDNER_CNOIDAL
        assert gardner20.to_dict()["k0"] == gardner20.k0

    def test_verdict_flips(self, gardner20):
        assert analyze("gardner", 20.0, gardner20.k0 - 0.01).verdict is Verdict.STABLE
        assert analyze("gardner", 20.0, gardner20.k0 + 0.01).verdict is Verdict.UNSTABLE

    def test_nearly_period_independent(self, gardner20):
        other = find_k0("gardner", 2 * math.pi)
        assert other.k0 == pytest.approx(gardner20.k0, abs=1e-4)

    def test_bracket_expansion(self):
        res = find_k0("gardner", 20.0, k_lo=0.3, k_hi=0.6)
        assert res.k0 == pytest.approx(0.909, abs=0.002)

    def test_single_sign_change(self):
        ks = np.linspace(0.05, 0.99, 40)
        found = sign_changes("gardner", 20.0, ks)
        assert len(found) == 1
        lo, hi = found[0]
        assert lo < 0.909 < hi


class TestNoThreshold:
    def test_dnoidal(self):
        with pytest.raises(NoThresholdError, match="keeps one sign"):
            find_k0("ckdv-dnoidal", 20.0)

    def test_bad_bracket(self):
        with pytest.raises(DomainError):
            find_k0("gardner", 20.0, k_lo=0.8, k_hi=0.5)
