import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hdunif import (DomainError, power_curve, power_fixedp_rayleigh,
                    power_highdim_rayleigh, power_specified, std_normal_cdf,
                    tau_from_kappa)

Z05 = 1.6448536269514722


class TestPowerSpecified:
    def test_null_level(self):
        for alpha in [0.01, 0.05, 0.2]:
            assert_allclose(power_specified(0.0, alpha), alpha, atol=1e-12)

    def test_half_power_at_z(self):
        assert_allclose(power_specified(Z05, 0.05), 0.5, atol=1e-10)

    def test_value(self):
        assert_allclose(power_specified(1.2, 0.05), 1.0 - std_normal_cdf(Z05 - 1.2), rtol=1e-14)
        assert_allclose(power_specified(1.2, 0.05), 0.328, atol=5e-4)


class TestPowerHighdim:
    def test_null_level(self):
        assert_allclose(power_highdim_rayleigh(0.0, 0.05), 0.05, atol=1e-12)

    def test_values(self):
        assert_allclose(power_highdim_rayleigh(1.2, 0.05), 0.265, atol=5e-4)
        assert_allclose(power_highdim_rayleigh(2.4, 0.05), 0.992, atol=5e-4)


class TestPowerFixedp:
    def test_null_level(self):
        for p in [2, 7]:
            assert_allclose(power_fixedp_rayleigh(p, 0.0, 0.05), 0.05, atol=1e-10)

    def test_below_specified(self):
        for tau in [0.5, 1.0, 2.0, 4.0]:
            for p in [2, 3, 10, 100]:
                assert power_fixedp_rayleigh(p, tau, 0.05) < power_specified(tau, 0.05)

    def test_simulation_oracle(self):
        # chi^2_3(4) exceedance of the chi^2_3 0.95 quantile
        rng = np.random.default_rng(2718281)
        m = 1_000_000
        z = rng.standard_normal((m, 3))
        z[:, 0] += 2.0
        vals = (z * z).sum(axis=1)
        from hdunif import chisq_quantile

        crit = chisq_quantile(3, 0.95)
        freq = float(np.mean(vals > crit))
        se = math.sqrt(freq * (1 - freq) / m)
        assert abs(power_fixedp_rayleigh(3, 2.0, 0.05) - freq) <= 3 * se


class TestTauFromKappa:
    def test_contiguous_schedule(self):
        for ell in [1, 2, 3]:
            n, p = 100, 400
            kappa = 0.6 * ell * math.sqrt(p / n)
            assert_allclose(tau_from_kappa(kappa, n, p, "contiguous"), 0.6 * ell, rtol=1e-13)

    def test_detectable_schedule(self):
        for ell in [1, 2, 3]:
            n, p = 100, 400
            kappa = 0.6 * ell * p ** 0.75 / math.sqrt(n)
            assert_allclose(tau_from_kappa(kappa, n, p, "detectable"), 0.6 * ell, rtol=1e-13)

    def test_zero(self):
        assert tau_from_kappa(0.0, 10, 10, "contiguous") == 0.0
        assert tau_from_kappa(0.0, 10, 10, "detectable") == 0.0

    def test_unknown_regime(self):
        with pytest.raises(DomainError):
            tau_from_kappa(1.0, 10, 10, "other")


class TestCurveProperties:
    def test_monotone_in_tau(self):
        taus = np.linspace(0.0, 6.0, 40)
        for name, p in [("specified", None), ("highdim", None), ("fixedp", 5)]:
            curve = power_curve(name, 0.05, taus, p=p)
            diffs = np.diff(curve.values)
            assert np.all(diffs >= 0)
            # strictly increasing until the curve saturates at 1 in doubles
            unsaturated = curve.values[:-1] < 1.0 - 1e-12
            assert np.all(diffs[unsaturated] > 0)
            assert np.all(curve.values >= 0.05 - 1e-12)
            assert np.all(curve.values <= 1.0)

    def test_blindness_limit(self):
        # contiguous-rate alternatives vanish for the high-dimensional test:
        # tau_detect = tau p^{-1/4}, so power -> alpha as p grows
        tau, n = 1.5, 10 ** 6
        p = 10 ** 6
        kappa = tau * math.sqrt(p / n)
        tau_detect = tau_from_kappa(kappa, n, p, "detectable")
        assert_allclose(tau_detect, tau * p ** -0.25, rtol=1e-12)
        assert power_highdim_rayleigh(tau_detect, 0.05) - 0.05 < 2e-3
