"""Gauss-Legendre quadrature of projection densities.

All one-dimensional integrals against the density of u = X'theta,

    t |-> c * (1 - t^2)^((p-3)/2) * f(kappa * t)   on [-1, 1],

are evaluated after the substitution t = sin(phi).  The transformed integrand
cos(phi)^(p-2) * f(kappa sin phi) is analytic on the closed interval for every
p >= 2 (the raw integrand has endpoint singularities at p = 2), so panel-wise
Gauss-Legendre converges spectrally.  Integrands are scaled by the maximum of
their log before exponentiation, which keeps kappa in the hundreds finite.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, QuadratureFailure

_HALF_PI = 0.5 * math.pi
_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}

_MAX_DEPTH = 16


def gl_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = leggauss(n)
    return _GL_CACHE[n]


def _panel(fn, a: float, b: float, x: np.ndarray, w: np.ndarray) -> float:
    half = 0.5 * (b - a)
    return half * float(w @ fn(a + half * (x + 1.0)))


def _adapt(fn, a, b, coarse, tol, floor, depth, x, w, counter, uncertified):
    m = 0.5 * (a + b)
    left = _panel(fn, a, m, x, w)
    right = _panel(fn, m, b, x, w)
    counter[0] += 2
    if counter[0] > 20000:
        raise QuadratureFailure("adaptive quadrature exceeded its panel budget")
    if abs(left + right - coarse) <= tol:
        return left + right
    if depth >= _MAX_DEPTH:
        uncertified[0] += 1
        return left + right
    # the per-level halving is floored at summation noise so concentrated
    # integrands cannot demand more accuracy than doubles can deliver
    child_tol = max(0.5 * tol, floor)
    return (_adapt(fn, a, m, left, child_tol, floor, depth + 1, x, w, counter, uncertified)
            + _adapt(fn, m, b, right, child_tol, floor, depth + 1, x, w, counter, uncertified))


def adaptive_gauss_legendre(fn: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                            rtol: float = 1e-12, atol: float = 0.0, nodes: int = 64) -> float:
    """Integrate a vectorized function over [a, b] to tolerance rtol*|I| + atol.

    atol > 0 is required when the integral itself can vanish (odd moments of a
    symmetric density); callers anchor it to the scale of the integrand.
    """
    x, w = gl_nodes(nodes)
    coarse = _panel(fn, a, b, x, w)
    # the single-panel estimate can grossly undershoot a concentrated spike,
    # so iterate until the magnitude used for the tolerances has stabilized
    estimate = abs(coarse)
    value = coarse
    for _ in range(4):
        tol = max(rtol * estimate, atol)
        if tol == 0.0:
            tol = 1e-300
        floor = 1e-16 * max(estimate, atol / max(rtol, 1e-30))
        counter = [1]
        uncertified = [0]
        value = _adapt(fn, a, b, coarse, tol, floor, 0, x, w, counter, uncertified)
        if uncertified[0] == 0 and abs(value) <= 2.0 * max(estimate, atol):
            return value
        estimate = abs(value)
    raise QuadratureFailure("adaptive quadrature did not certify its tolerance")


class _LogWeight:
    """log of the unnormalized phi-space integrand (p-2) log cos(phi) + log f(kappa sin phi)."""

    def __init__(self, p: int, kappa: float, logf: Optional[Callable[[np.ndarray], np.ndarray]]):
        if p < 2:
            raise DomainError(f"projection densities require p >= 2, got {p}")
        if kappa < 0:
            raise DomainError(f"kappa must be >= 0, got {kappa}")
        self.p = p
        self.kappa = kappa
        self.logf = logf  # None means f = exp (covers the uniform case via kappa = 0)

    def __call__(self, phi: np.ndarray) -> np.ndarray:
        c = np.cos(phi)
        out = (self.p - 2) * np.log(np.maximum(c, 1e-300))
        s = self.kappa * np.sin(phi)
        if self.logf is None:
            out = out + s
        else:
            out = out + self.logf(s)
        return out


def _log_weight_for_f(p: int, kappa: float, f: Optional[Callable[[float], float]]) -> _LogWeight:
    if f is None:
        return _LogWeight(p, kappa, None)

    def logf(s: np.ndarray) -> np.ndarray:
        vals = np.asarray([f(float(v)) for v in np.atleast_1d(s)], dtype=float)
        if np.any(vals <= 0.0):
            raise DomainError("f must be positive on [-kappa, kappa]")
        return np.log(vals).reshape(np.shape(s))

    return _LogWeight(p, kappa, logf)


def _log_weight_peak(lw: _LogWeight, probes: int = 2049) -> float:
    phi = np.linspace(-_HALF_PI, _HALF_PI, probes)
    return float(np.max(lw(phi)))


def log_weight_integral(lw: _LogWeight, rtol: float = 1e-12) -> float:
    """log of integral over [-pi/2, pi/2] of exp(lw(phi)) d(phi)."""
    shift = _log_weight_peak(lw)
    value = adaptive_gauss_legendre(lambda phi: np.exp(lw(phi) - shift),
                                    -_HALF_PI, _HALF_PI, rtol=rtol)
    if not value > 0.0:
        raise QuadratureFailure("projection density integrated to a non-positive mass")
    return shift + math.log(value)


def log_norm_const_general(p: int, kappa: float,
                           f: Optional[Callable[[float], float]] = None,
                           rtol: float = 1e-12) -> float:
    """log c_{p,kappa,f} with c = 1 / integral_{-1}^{1} (1-t^2)^((p-3)/2) f(kappa t) dt.

    f = None selects f = exp; the uniform weight is kappa = 0.
    """
    return -log_weight_integral(_log_weight_for_f(p, kappa, f), rtol=rtol)


def norm_const_general(p: int, kappa: float,
                       f: Optional[Callable[[float], float]] = None) -> float:
    return math.exp(log_norm_const_general(p, kappa, f))


def density_moment(lw: _LogWeight, g: Callable[[np.ndarray], np.ndarray],
                   rtol: float = 1e-12) -> float:
    """E[g(phi)] under the normalized density proportional to exp(lw(phi))."""
    shift = _log_weight_peak(lw)
    mass = adaptive_gauss_legendre(lambda phi: np.exp(lw(phi) - shift),
                                   -_HALF_PI, _HALF_PI, rtol=rtol)
    if not mass > 0.0:
        raise QuadratureFailure("projection density integrated to a non-positive mass")
    num = adaptive_gauss_legendre(lambda phi: g(phi) * np.exp(lw(phi) - shift),
                                  -_HALF_PI, _HALF_PI, rtol=rtol, atol=rtol * mass)
    return num / mass


@dataclass(frozen=True)
class UCdfTable:
    """Tabulated phi-space CDF of u = X'theta on a uniform 4096-panel grid.

    log_dens_shift turns the unnormalized log weight into the normalized log
    density: log dens(phi) = lw(phi) - log_dens_shift.
    """

    p: int
    kappa: float
    phi: np.ndarray          # grid, length panels + 1
    cdf: np.ndarray          # CDF at the grid, cdf[0] = 0, cdf[-1] = 1
    log_dens_shift: float
    logf: Optional[Callable[[np.ndarray], np.ndarray]]  # None selects f = exp

    def log_density(self, phi: np.ndarray) -> np.ndarray:
        lw = _LogWeight(self.p, self.kappa, self.logf)
        return lw(phi) - self.log_dens_shift

    def cdf_at(self, phi: float, nodes: int = 64) -> float:
        """CDF at an arbitrary phi, from the nearest tabulated node leftward."""
        k = int(np.searchsorted(self.phi, phi, side="right")) - 1
        k = min(max(k, 0), len(self.phi) - 2)
        x, w = gl_nodes(nodes)
        a = float(self.phi[k])
        half = 0.5 * (phi - a)
        dens = np.exp(self.log_density(a + half * (x + 1.0)))
        return float(self.cdf[k]) + half * float(w @ dens)


def build_u_cdf_table(p: int, kappa: float,
                      logf: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                      panels: int = 4096) -> UCdfTable:
    """Tabulate the phi-space CDF with composite 16-node Gauss-Legendre panels."""
    lw = _LogWeight(p, kappa, logf)
    shift = _log_weight_peak(lw, probes=2 * panels + 1)
    phi = np.linspace(-_HALF_PI, _HALF_PI, panels + 1)
    x, w = gl_nodes(16)
    half = 0.5 * (phi[1] - phi[0])
    nodes = phi[:-1, None] + half * (x[None, :] + 1.0)
    dens = np.exp(lw(nodes.ravel()) - shift).reshape(panels, 16)
    masses = half * (dens @ w)
    cdf = np.concatenate(([0.0], np.cumsum(masses)))
    total = cdf[-1]
    if not total > 0.0:
        raise QuadratureFailure("CDF tabulation produced a non-positive total mass")
    cdf /= total
    cdf[-1] = 1.0
    return UCdfTable(p=p, kappa=kappa, phi=phi, cdf=cdf,
                     log_dens_shift=shift + math.log(total), logf=logf)
