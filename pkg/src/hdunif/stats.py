"""Test statistics and decision rules.

Uniformity on the sphere: the Rayleigh statistic R = n p ||xbar||^2 in its
fixed-p (chi-square) and high-dimensional standardized forms, and the
specified-axis linear test.  Sphericity in R^p about the origin: Rayleigh on
spatial signs, the trace-ratio Gaussian test with the high-dimensional normal
standardization, and a standardized pairwise sign U-statistic.

Every implemented test is one-sided upper: reject iff statistic > critical.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateData, DimensionMismatch, DomainError, ZeroVector
from .special import (chisq_cdf, chisq_quantile, log_H, std_normal_cdf,
                      std_normal_quantile)


@dataclass(frozen=True)
class TestOutcome:
    test_id: str
    statistic: float
    critical: float
    p_value: float
    reject: bool
    alpha: float


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must be in (0, 1), got {alpha}")


def _normal_outcome(test_id: str, stat: float, alpha: float) -> TestOutcome:
    crit = std_normal_quantile(1.0 - alpha)
    return TestOutcome(test_id=test_id, statistic=stat, critical=crit,
                       p_value=1.0 - std_normal_cdf(stat), reject=stat > crit, alpha=alpha)


def rayleigh_statistic(sample: np.ndarray) -> float:
    """R = n p ||xbar||^2."""
    sample = np.asarray(sample, dtype=float)
    n, p = sample.shape
    xbar = sample.mean(axis=0)
    return n * p * float(xbar @ xbar)


def rayleigh_standardized(sample: np.ndarray) -> float:
    """(R - p) / sqrt(2p); equals the pairwise sum sqrt(2p)/n * sum_{i<j} X_i'X_j."""
    sample = np.asarray(sample, dtype=float)
    n, p = sample.shape
    return (rayleigh_statistic(sample) - p) / math.sqrt(2.0 * p)


def rayleigh_pairwise_form(sample: np.ndarray) -> float:
    """sqrt(2p)/n * sum_{i<j} X_i'X_j, computed from the explicit Gram matrix."""
    sample = np.asarray(sample, dtype=float)
    n, p = sample.shape
    gram = sample @ sample.T
    off = float(gram.sum() - np.trace(gram)) / 2.0
    return math.sqrt(2.0 * p) / n * off


def rayleigh_test_highdim(sample: np.ndarray, alpha: float) -> TestOutcome:
    """Standardized Rayleigh against the standard normal null."""
    _check_alpha(alpha)
    return _normal_outcome("rayleigh_highdim", rayleigh_standardized(sample), alpha)


def rayleigh_test_fixedp(sample: np.ndarray, alpha: float) -> TestOutcome:
    """Rayleigh statistic against its chi-square(p) null."""
    _check_alpha(alpha)
    sample = np.asarray(sample, dtype=float)
    p = sample.shape[1]
    stat = rayleigh_statistic(sample)
    crit = chisq_quantile(p, 1.0 - alpha)
    return TestOutcome(test_id="rayleigh_fixedp", statistic=stat, critical=crit,
                       p_value=1.0 - chisq_cdf(p, stat), reject=stat > crit, alpha=alpha)


def specified_theta_test(sample: np.ndarray, theta: np.ndarray, alpha: float) -> TestOutcome:
    """sqrt(n p) xbar'theta against z_alpha (locally optimal for a known axis)."""
    _check_alpha(alpha)
    sample = np.asarray(sample, dtype=float)
    theta = np.asarray(theta, dtype=float).reshape(-1)
    n, p = sample.shape
    if theta.size != p:
        raise DimensionMismatch(f"theta has dimension {theta.size}, sample has p={p}")
    stat = math.sqrt(n * p) * float(sample.mean(axis=0) @ theta)
    return _normal_outcome("specified_theta", stat, alpha)


def fvml_loglik_specified(sample: np.ndarray, theta: np.ndarray, kappa: float) -> float:
    """Exact log-likelihood ratio of FvML(theta, kappa) to uniformity:
    -n log H_{p/2-1}(kappa) + kappa * sum_i X_i'theta."""
    if kappa < 0:
        raise DomainError(f"kappa must be >= 0, got {kappa}")
    sample = np.asarray(sample, dtype=float)
    theta = np.asarray(theta, dtype=float).reshape(-1)
    n, p = sample.shape
    if theta.size != p:
        raise DimensionMismatch(f"theta has dimension {theta.size}, sample has p={p}")
    if kappa == 0.0:
        return 0.0
    return -n * log_H(0.5 * p - 1.0, kappa) + kappa * float((sample @ theta).sum())


def fvml_loglik_invariant(sample: np.ndarray, kappa: float) -> float:
    """Rotation-invariant FvML log-likelihood ratio (the theta-averaged likelihood):
    -n log H_{p/2-1}(kappa) + log H_{p/2-1}(kappa * n * ||xbar||)."""
    if kappa < 0:
        raise DomainError(f"kappa must be >= 0, got {kappa}")
    sample = np.asarray(sample, dtype=float)
    n, p = sample.shape
    if kappa == 0.0:
        return 0.0
    nu = 0.5 * p - 1.0
    norm_sum = float(np.linalg.norm(sample.mean(axis=0))) * n
    return -n * log_H(nu, kappa) + log_H(nu, kappa * norm_sum)


def lan_residual_specified(sample: np.ndarray, theta: np.ndarray, tau: float) -> float:
    """Exact specified-axis log-likelihood minus its quadratic (LAN) approximation
    at kappa = tau sqrt(p/n): Lambda - (tau * Delta_theta - tau^2/2)."""
    if tau < 0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    if tau == 0.0:
        return 0.0
    sample = np.asarray(sample, dtype=float)
    n, p = sample.shape
    kappa = tau * math.sqrt(p / n)
    lam = fvml_loglik_specified(sample, theta, kappa)
    delta = math.sqrt(n * p) * float(sample.mean(axis=0) @ np.asarray(theta, float).reshape(-1))
    return lam - (tau * delta - 0.5 * tau * tau)


def lan_residual_invariant(sample: np.ndarray, tau: float) -> float:
    """Exact invariant log-likelihood minus its quadratic approximation at
    kappa = tau p^{3/4}/sqrt(n): Lambda - (tau^2 R_st/sqrt(2) - tau^4/4)."""
    if tau < 0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    if tau == 0.0:
        return 0.0
    sample = np.asarray(sample, dtype=float)
    n, p = sample.shape
    kappa = tau * p ** 0.75 / math.sqrt(n)
    lam = fvml_loglik_invariant(sample, kappa)
    r_st = rayleigh_standardized(sample)
    return lam - (tau * tau * r_st / math.sqrt(2.0) - 0.25 * tau ** 4)


def _sign_projection(data: np.ndarray) -> np.ndarray:
    data = np.asarray(data, dtype=float)
    norms = np.linalg.norm(data, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroVector(f"row {int(zero[0])} is the zero vector")
    return data / norms[:, None]


def rayleigh_signs_test(data: np.ndarray, alpha: float) -> TestOutcome:
    """High-dimensional Rayleigh test applied to the spatial signs of the data."""
    _check_alpha(alpha)
    out = rayleigh_test_highdim(_sign_projection(data), alpha)
    return TestOutcome(test_id="rayleigh_signs", statistic=out.statistic,
                       critical=out.critical, p_value=out.p_value,
                       reject=out.reject, alpha=alpha)


def john_sphericity_test(data: np.ndarray, alpha: float) -> TestOutcome:
    """Trace-ratio sphericity test about the origin with the high-dimensional
    normal standardization: W = (n U - p - 1)/2 with U = p tr(S^2)/(tr S)^2 - 1,
    S the uncentered second-moment matrix."""
    _check_alpha(alpha)
    data = np.asarray(data, dtype=float)
    n, p = data.shape
    if n < 2 or p < 2:
        raise DomainError(f"need n >= 2 and p >= 2, got ({n}, {p})")
    # tr(S) and tr(S^2) through the smaller Gram side
    if n <= p:
        gram = data @ data.T
        tr_s = float(np.trace(gram)) / n
        tr_s2 = float((gram * gram).sum()) / (n * n)
    else:
        s = data.T @ data
        tr_s = float(np.trace(s)) / n
        tr_s2 = float((s * s).sum()) / (n * n)
    if tr_s == 0.0:
        raise DegenerateData("total scatter tr(S) is zero")
    u = p * tr_s2 / (tr_s * tr_s) - 1.0
    stat = 0.5 * (n * u - p - 1.0)
    return _normal_outcome("john", stat, alpha)


def sign_sphericity_test(data: np.ndarray, alpha: float) -> TestOutcome:
    """Standardized pairwise sign U-statistic:

        T = sum_{i<j} (p (U_i'U_j)^2 - 1) / sqrt(n(n-1)(p-1)/(p+2)),

    with U_i the spatial signs.  Under uniform signs E[(U'V)^2] = 1/p and
    E[(U'V)^4] = 3/(p(p+2)), so each summand has mean 0 and variance
    2(p-1)/(p+2), and distinct pairs are uncorrelated.
    """
    _check_alpha(alpha)
    signs = _sign_projection(data)
    n, p = signs.shape
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    gram = signs @ signs.T
    sq_off = float((gram * gram).sum() - np.trace(gram * gram)) / 2.0
    num = p * sq_off - 0.5 * n * (n - 1)
    stat = num / math.sqrt(n * (n - 1) * (p - 1) / (p + 2))
    return _normal_outcome("sign_sphericity", stat, alpha)
