"""Closed-form asymptotic power curves and the kappa <-> tau regime maps.

Two local-alternative regimes appear throughout: the "contiguous" rate
kappa = tau sqrt(p/n) (detected by the specified-axis test, invisible to the
Rayleigh test in high dimensions) and the "detectable" rate
kappa = tau p^{3/4}/sqrt(n) (the Rayleigh test's own contiguity rate).
Power curves are parameterized by tau; tau_from_kappa is the explicit bridge.
"""

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DomainError
from .special import (chisq_quantile, noncentral_chisq_cdf, std_normal_cdf,
                      std_normal_quantile)

Regime = Literal["contiguous", "detectable"]


@dataclass(frozen=True)
class PowerCurve:
    alpha: float
    taus: np.ndarray
    values: np.ndarray


def _check(tau: float, alpha: float) -> float:
    if tau < 0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must be in (0, 1), got {alpha}")
    return std_normal_quantile(1.0 - alpha)


def power_specified(tau: float, alpha: float) -> float:
    """1 - Phi(z_alpha - tau): limiting power of the specified-axis test."""
    z = _check(tau, alpha)
    return 1.0 - std_normal_cdf(z - tau)


def power_highdim_rayleigh(tau: float, alpha: float) -> float:
    """1 - Phi(z_alpha - tau^2/sqrt(2)): limiting power of the standardized
    Rayleigh test under detectable-rate alternatives."""
    z = _check(tau, alpha)
    return 1.0 - std_normal_cdf(z - tau * tau / math.sqrt(2.0))


def power_fixedp_rayleigh(p: int, tau: float, alpha: float) -> float:
    """P[chi2_p(tau^2) > chi2_p^{-1}(1-alpha)]: fixed-p limiting Rayleigh power."""
    _check(tau, alpha)
    crit = chisq_quantile(p, 1.0 - alpha)
    return 1.0 - noncentral_chisq_cdf(p, tau * tau, crit)


def tau_from_kappa(kappa: float, n: int, p: int, regime: Regime) -> float:
    """Invert the concentration schedule: contiguous tau = kappa sqrt(n/p),
    detectable tau = kappa sqrt(n) / p^{3/4}."""
    if kappa < 0:
        raise DomainError(f"kappa must be >= 0, got {kappa}")
    if n < 1 or p < 1:
        raise DomainError(f"need n, p >= 1, got ({n}, {p})")
    if regime == "contiguous":
        return kappa * math.sqrt(n / p)
    if regime == "detectable":
        return kappa * math.sqrt(n) / p ** 0.75
    raise DomainError(f"unknown regime {regime!r}")


def power_curve(curve: str, alpha: float, taus: Sequence[float], p: int | None = None) -> PowerCurve:
    """Evaluate one of the named power curves on a tau grid."""
    taus_arr = np.asarray(list(taus), dtype=float)
    if curve == "specified":
        vals = [power_specified(t, alpha) for t in taus_arr]
    elif curve == "highdim":
        vals = [power_highdim_rayleigh(t, alpha) for t in taus_arr]
    elif curve == "fixedp":
        if p is None:
            raise DomainError("the fixed-p curve needs the dimension p")
        vals = [power_fixedp_rayleigh(p, t, alpha) for t in taus_arr]
    else:
        raise DomainError(f"unknown power curve {curve!r}")
    return PowerCurve(alpha=alpha, taus=taus_arr, values=np.asarray(vals))
