"""Samplers: uniform sphere, rotationally symmetric laws, and the Euclidean
alternatives used by the sphericity application (skew-normal, spiked Gaussian).

Rotationally symmetric draws are built constructively from the tangent-normal
decomposition X = u*theta + sqrt(1-u^2)*S: u comes from the one-dimensional
projection law by inverse CDF (exact up to quadrature tolerance, one code path
for every radial family), S is uniform on the equator {x : x'theta = 0}.

All samplers take an explicit numpy Generator and consume a fixed pattern of
draws (n uniforms for u, then n*p normals for S), so identical seeds give
bit-identical samples.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from ._kernels import refine_quantiles
from .errors import DomainError, InfeasibleMoments, ZeroVector
from .quadrature import UCdfTable, build_u_cdf_table
from .sphere import unit_vector

Q_TOL = 1e-12


@dataclass(frozen=True)
class Uniform:
    """u has the uniform-sphere projection law (density ~ (1-t^2)^((p-3)/2))."""


@dataclass(frozen=True)
class FvML:
    """Fisher-von Mises-Langevin concentration family: density ~ exp(kappa * t) weight."""

    kappa: float

    def __post_init__(self):
        if self.kappa < 0:
            raise DomainError(f"FvML concentration must be >= 0, got {self.kappa}")


@dataclass(frozen=True)
class BetaMatched:
    """u = 2*Beta(a, b) - 1 with mean e1 and variance pinned to 1/p."""

    e1: float
    p: int
    shapes: tuple[float, float] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "shapes", solve_beta_shapes(self.e1, self.p))


@dataclass(frozen=True)
class CustomMonotone:
    """Projection weight f(kappa * t) for a strictly increasing f with f(0) = f'(0) = 1."""

    f: Callable[[float], float]
    kappa: float

    def __post_init__(self):
        if self.kappa < 0:
            raise DomainError(f"concentration must be >= 0, got {self.kappa}")
        f0 = self.f(0.0)
        if abs(f0 - 1.0) > 1e-12:
            raise DomainError(f"f(0) must equal 1, got {f0}")
        h = 1e-6
        slope = (self.f(h) - 1.0) / h
        if abs(slope - 1.0) > 1e-3:
            raise DomainError(f"f'(0) must equal 1, got {slope}")
        if self.kappa > 0:
            grid = [self.f(t) for t in np.linspace(-self.kappa, self.kappa, 33)]
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise DomainError("f must be strictly increasing on [-kappa, kappa]")


RadialLaw = Union[Uniform, FvML, BetaMatched, CustomMonotone]


@dataclass(frozen=True)
class RotSymModel:
    """Rotationally symmetric law on the sphere: modal axis theta and a radial law."""

    theta: np.ndarray
    radial: RadialLaw

    def __post_init__(self):
        object.__setattr__(self, "theta", unit_vector(self.theta))
        if isinstance(self.radial, BetaMatched) and self.radial.p != self.theta.size:
            raise DomainError(
                f"BetaMatched is pinned to p={self.radial.p}, theta has p={self.theta.size}")


@dataclass(frozen=True)
class SkewNormal:
    """Skew-normal in R^p: location 0, scatter I_p, skewness vector (ell, ..., ell)'."""

    ell: float
    p: int

    def __post_init__(self):
        if self.ell < 0:
            raise DomainError(f"ell must be >= 0, got {self.ell}")


@dataclass(frozen=True)
class Spiked:
    """Gaussian in R^p with mean 0 and covariance I_p + ell * e1 e1'."""

    ell: float
    p: int

    def __post_init__(self):
        if self.ell < 0:
            raise DomainError(f"ell must be >= 0, got {self.ell}")


EuclideanModel = Union[SkewNormal, Spiked]


def solve_beta_shapes(e1: float, p: int) -> tuple[float, float]:
    """Shapes (a, b) of the beta law of (u+1)/2 with mean e1 and Var[u] = 1/p."""
    if p < 2:
        raise DomainError(f"solve_beta_shapes requires p >= 2, got {p}")
    m = 0.5 * (1.0 + e1)
    v = 0.25 / p
    if not 0.0 < m < 1.0 or v >= m * (1.0 - m):
        raise InfeasibleMoments(
            f"no beta law on [0,1] has mean {m} and variance {v} (need v < m(1-m))")
    c = m * (1.0 - m) / v - 1.0
    return m * c, (1.0 - m) * c


@lru_cache(maxsize=64)
def _u_table(law: RadialLaw, p: int) -> UCdfTable:
    if isinstance(law, Uniform):
        return build_u_cdf_table(p, 0.0, logf=None)
    if isinstance(law, FvML):
        return build_u_cdf_table(p, law.kappa, logf=None)
    if isinstance(law, CustomMonotone):
        f = law.f

        def logf(s: np.ndarray) -> np.ndarray:
            flat = np.atleast_1d(s)
            vals = np.asarray([f(float(v)) for v in flat], dtype=float)
            if np.any(vals <= 0.0):
                raise DomainError("f must be positive on [-kappa, kappa]")
            return np.log(vals).reshape(np.shape(s))

        return build_u_cdf_table(p, law.kappa, logf=logf)
    raise DomainError(f"no quadrature table for {type(law).__name__}")


def inverse_cdf_u(radial: RadialLaw, p: int, q: float) -> float:
    """Quantile of u = X'theta, |CDF(result) - q| <= 1e-12 (bisection on the
    tabulated quadrature CDF)."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile level must be in (0, 1), got {q}")
    if isinstance(radial, BetaMatched):
        from scipy.special import betaincinv

        a, b = radial.shapes
        return float(2.0 * betaincinv(a, b, q) - 1.0)
    table = _u_table(radial, p)
    k = int(np.searchsorted(table.cdf, q, side="right")) - 1
    k = min(max(k, 0), len(table.phi) - 2)
    lo, hi = float(table.phi[k]), float(table.phi[k + 1])
    if table.cdf[k + 1] - table.cdf[k] <= Q_TOL:
        return math.sin(0.5 * (lo + hi))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        err = table.cdf_at(mid) - q
        if abs(err) <= Q_TOL:
            return math.sin(mid)
        if err > 0:
            hi = mid
        else:
            lo = mid
    return math.sin(0.5 * (lo + hi))


def sample_u(radial: RadialLaw, p: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. draws of u = X'theta (consumes exactly n uniforms / beta draws)."""
    if isinstance(radial, BetaMatched):
        a, b = radial.shapes
        return 2.0 * rng.beta(a, b, size=n) - 1.0
    qs = rng.random(n)
    return refine_quantiles(qs, _u_table(radial, p), tol=Q_TOL)


def _rows_to_unit(z: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(z, axis=1)
    if np.any(norms == 0.0):
        raise ZeroVector("degenerate zero draw while normalizing rows")
    return z / norms[:, None]


def sample_uniform_sphere(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. uniform draws on the (p-1)-sphere (normalized Gaussians)."""
    if n < 1 or p < 2:
        raise DomainError(f"need n >= 1 and p >= 2, got ({n}, {p})")
    return _rows_to_unit(rng.standard_normal((n, p)))


def sample_equator(theta: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. uniform draws on the equator {x : x'theta = 0}."""
    p = theta.size
    z = rng.standard_normal((n, p))
    z -= np.outer(z @ theta, theta)
    return _rows_to_unit(z)


def sample_rot_sym(model: RotSymModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. draws from the rotationally symmetric law X = u*theta + sqrt(1-u^2)*S."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    theta = model.theta
    p = theta.size
    u = sample_u(model.radial, p, n, rng)
    s = sample_equator(theta, n, rng)
    v = np.sqrt(np.maximum(0.0, (1.0 - u) * (1.0 + u)))
    return np.outer(u, theta) + v[:, None] * s


def sample_skew_normal(model: SkewNormal, n: int, rng: np.random.Generator) -> np.ndarray:
    """Selection sampler for the density 2 phi_p(x) Phi(alpha'x), alpha = (ell,...,ell)'.

    Draw Z ~ N_p(0, I) and W ~ N(0, 1); keep Z when W <= alpha'Z, else flip to -Z.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    z = rng.standard_normal((n, model.p))
    w = rng.standard_normal(n)
    flip = w > model.ell * z.sum(axis=1)
    z[flip] = -z[flip]
    return z


def sample_spiked_gaussian(model: Spiked, n: int, rng: np.random.Generator) -> np.ndarray:
    """N_p(0, I + ell e1 e1'): scale the first coordinate of a standard normal."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    z = rng.standard_normal((n, model.p))
    z[:, 0] *= math.sqrt(1.0 + model.ell)
    return z
