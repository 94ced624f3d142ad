"""Moments of the projection u = X'theta and standardized-Rayleigh mean/variance.

MomentSet carries the six scalars driving the non-null behaviour of the
standardized Rayleigh statistic: e1 = E[u], e2 = E[u^2], the central moments
e_tilde2 = E[(u-e1)^2] and e_tilde4 = E[(u-e1)^4], and f2 = E[1-u^2],
f4 = E[(1-u^2)^2].
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .distributions import BetaMatched, CustomMonotone, FvML, RadialLaw, Uniform
from .errors import DegenerateMoments, DimensionMismatch, DomainError
from .quadrature import _LogWeight, density_moment


@dataclass(frozen=True)
class MomentSet:
    e1: float
    e2: float
    e_tilde2: float
    e_tilde4: float
    f2: float
    f4: float


def _custom_logf(law: CustomMonotone) -> Callable[[np.ndarray], np.ndarray]:
    def logf(s: np.ndarray) -> np.ndarray:
        flat = np.atleast_1d(s)
        vals = np.asarray([law.f(float(v)) for v in flat], dtype=float)
        return np.log(vals).reshape(np.shape(s))

    return logf


def _beta_moments(law: BetaMatched) -> MomentSet:
    # closed forms; u = 2B - 1 with B ~ Beta(a, b), s = a + b
    a, b = law.shapes
    s = a + b
    e1 = (a - b) / s
    var = 4.0 * a * b / (s * s * (s + 1.0))
    mu4 = 3.0 * a * b * (a * b * (s - 6.0) + 2.0 * s * s) / (
        s ** 4 * (s + 1.0) * (s + 2.0) * (s + 3.0))
    e_tilde4 = 16.0 * mu4
    e2 = var + e1 * e1
    f4 = 16.0 * a * (a + 1.0) * b * (b + 1.0) / (s * (s + 1.0) * (s + 2.0) * (s + 3.0))
    return MomentSet(e1=e1, e2=e2, e_tilde2=var, e_tilde4=e_tilde4, f2=1.0 - e2, f4=f4)


def moments_quadrature(radial: RadialLaw, p: int) -> MomentSet:
    """Exact (Gauss-Legendre) moments of the projection law.

    In phi-space (u = sin phi) the f-moments are plain cosine powers:
    1 - u^2 = cos^2 phi.  e_tilde4 and f4 are integrated directly rather than
    recombined from raw moments, to avoid cancellation.
    """
    if isinstance(radial, BetaMatched):
        if radial.p != p:
            raise DomainError(f"BetaMatched is pinned to p={radial.p}, asked for p={p}")
        return _beta_moments(radial)
    if isinstance(radial, Uniform):
        lw = _LogWeight(p, 0.0, None)
    elif isinstance(radial, FvML):
        lw = _LogWeight(p, radial.kappa, None)
    elif isinstance(radial, CustomMonotone):
        lw = _LogWeight(p, radial.kappa, _custom_logf(radial))
    else:
        raise DomainError(f"unknown radial law {type(radial).__name__}")
    e1 = density_moment(lw, np.sin)
    e2 = density_moment(lw, lambda phi: np.sin(phi) ** 2)
    e_tilde2 = density_moment(lw, lambda phi: (np.sin(phi) - e1) ** 2)
    e_tilde4 = density_moment(lw, lambda phi: (np.sin(phi) - e1) ** 4)
    f2 = density_moment(lw, lambda phi: np.cos(phi) ** 2)
    f4 = density_moment(lw, lambda phi: np.cos(phi) ** 4)
    return MomentSet(e1=e1, e2=e2, e_tilde2=e_tilde2, e_tilde4=e_tilde4, f2=f2, f4=f4)


def moments_empirical(sample: np.ndarray, theta: np.ndarray) -> MomentSet:
    """Plug-in sample analogues of the six moments."""
    sample = np.asarray(sample, dtype=float)
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if sample.ndim != 2 or sample.shape[1] != theta.size:
        raise DimensionMismatch(
            f"sample of shape {sample.shape} does not match theta of dimension {theta.size}")
    u = sample @ theta
    e1 = float(np.mean(u))
    e2 = float(np.mean(u * u))
    centered = u - e1
    om = (1.0 - u) * (1.0 + u)
    return MomentSet(
        e1=e1,
        e2=e2,
        e_tilde2=float(np.mean(centered ** 2)),
        e_tilde4=float(np.mean(centered ** 4)),
        f2=float(np.mean(om)),
        f4=float(np.mean(om * om)),
    )


def rayleigh_mean_var(m: MomentSet, n: int, p: int) -> tuple[float, float]:
    """Mean and sigma^2 of the standardized Rayleigh statistic under the projection law:

        E = (n-1) sqrt(p) e1^2 / sqrt(2),
        sigma^2 = p e_tilde2^2 + 2 n p e1^2 e_tilde2 + f2^2.
    """
    if n < 2:
        raise DomainError(f"rayleigh_mean_var requires n >= 2, got {n}")
    mean = (n - 1) * math.sqrt(p) * m.e1 ** 2 / math.sqrt(2.0)
    sigma2 = p * m.e_tilde2 ** 2 + 2.0 * n * p * m.e1 ** 2 * m.e_tilde2 + m.f2 ** 2
    return mean, sigma2


def condition_diagnostics(m: MomentSet, n: int, p: int) -> tuple[float, float, float]:
    """The three CLT-condition ratios; all small means the normal limit applies.

    Returns (min(p e2~^2/f2^2, e2~/(n e1^2)), e4~/(n e2~^2), f4/(n f2^2)).
    The second branch of the min is +inf when e1 = 0 (either branch suffices).
    """
    if m.f2 == 0.0 or m.e_tilde2 == 0.0:
        raise DegenerateMoments("point-mass projection law: f2 or e_tilde2 vanishes")
    first_a = p * m.e_tilde2 ** 2 / m.f2 ** 2
    first_b = math.inf if m.e1 == 0.0 else m.e_tilde2 / (n * m.e1 ** 2)
    return (
        min(first_a, first_b),
        m.e_tilde4 / (n * m.e_tilde2 ** 2),
        m.f4 / (n * m.f2 ** 2),
    )


def local_alternative_map(kappa: float, p: int,
                          f: Optional[Callable[[float], float]] = None,
                          f2dd0: Optional[float] = None) -> tuple[float, float]:
    """Second-order small-kappa approximations of (e1, e2):

        e1 ~ (kappa/p) / (1 + kappa^2 f''(0) / (2p)),
        e2 ~ (1/p)     / (1 + kappa^2 f''(0) / (2p)).

    f''(0) may be passed directly; otherwise it is estimated by central
    differences at h = 1e-4 (f = None means f = exp, f''(0) = 1).
    """
    if kappa < 0:
        raise DomainError(f"kappa must be >= 0, got {kappa}")
    if f2dd0 is None:
        if f is None:
            f2dd0 = 1.0
        else:
            h = 1e-4
            f2dd0 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h)
    denom = 1.0 + kappa * kappa * f2dd0 / (2.0 * p)
    return (kappa / p) / denom, (1.0 / p) / denom
